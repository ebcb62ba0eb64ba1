"""Test modules for the persformer toolkit."""
