"""Unit tests for API parameter validation functions."""

import pytest

from app.api import ValidationError, config, validate_bound, validate_scheme


class TestValidateBound:
    """Test norm bound validation."""

    @pytest.mark.parametrize("value,expected", [
        ("0", 0),
        ("4", 4),
        ("16", 16),
        ("0008", 8),
    ])
    def test_valid_bounds(self, value, expected):
        """Digit strings up to the configured maximum pass."""
        assert validate_bound(value, 8) == expected

    def test_default_when_absent(self):
        assert validate_bound(None, 8) == 8

    def test_default_capped(self):
        """A configured default above the API maximum is clamped."""
        assert validate_bound(None, 1000) == config.max_api_bound

    @pytest.mark.parametrize("invalid", [
        "-1",  # Sign
        "1.5",  # Fraction
        "12345",  # Too many digits
        "17",  # Above maximum
        "",  # Empty string
        " 4",  # Leading space
        "4;ls",  # Command injection
        "0x10",  # Hex
    ])
    def test_invalid_bounds(self, invalid):
        """Anything else is rejected."""
        with pytest.raises(ValidationError):
            validate_bound(invalid, 8)


class TestValidateScheme:
    """Test scheme name validation."""

    @pytest.mark.parametrize("scheme", ["product", "chain", "graded", "binary", "support", "square"])
    def test_valid_schemes(self, scheme):
        assert validate_scheme(scheme) == scheme

    @pytest.mark.parametrize("invalid", [None, "", "Product", "cube", "product "])
    def test_invalid_schemes(self, invalid):
        with pytest.raises(ValidationError):
            validate_scheme(invalid)
