"""Test suite for invkit."""
