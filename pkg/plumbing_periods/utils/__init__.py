"""
Utility modules for plumbing_periods.
"""
