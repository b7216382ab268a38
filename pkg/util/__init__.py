"""
Utility objects for use within the codebase.
"""
from .memo import Memo
