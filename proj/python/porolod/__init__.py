from ._porolod import *  # noqa: F401,F403
