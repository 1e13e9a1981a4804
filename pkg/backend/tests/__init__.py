"""
Test package for the heaviest-cycle bound verifier
"""
