"""Wi-Fi RSS indoor positioning with dilution-of-precision quality indicators.

The heavy lifting lives in the compiled extension ``wifidop._core``; this
package re-exports its surface.
"""

from wifidop._core import *  # noqa: F401,F403
from wifidop._core import __version__  # noqa: F401
