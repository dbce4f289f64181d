"""Tests for io module."""
