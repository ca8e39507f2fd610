"""
The `util` module contains utility functions.
"""
from .general import *
