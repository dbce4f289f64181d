"""Tests for sets module."""
