"""Tests for bridge module."""
