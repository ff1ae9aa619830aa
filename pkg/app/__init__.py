"""sqfree-lab - square-free factorizations in commutative monoids."""

import os

__version__ = os.environ.get("APP_VERSION", "0.0.0")
