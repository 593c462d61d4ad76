"""Test suite for hybrid-cooling."""
