"""
Tests for carpetres.
"""
