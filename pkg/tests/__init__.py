"""Tests for unimodular-dilations - geometry, verification and the tool surfaces."""
