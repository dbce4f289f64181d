"""Tests for conditions module."""
