"""assignpmas tests."""
