"""Tests for lp module."""
