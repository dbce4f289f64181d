"""Tests for numerics module."""
