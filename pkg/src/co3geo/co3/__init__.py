"""Verification suite for the 2-local structure of the degree-276 group."""
