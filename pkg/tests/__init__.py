"""Test suite for sqfree-lab."""
