"""
cyclebound: exact verification of the weighted local cycle inequality
"""

__version__ = "1.0.0"
