"""Construction config parsing and its diagnostics."""

import numpy as np
import pytest

from vilenkin import ConfigError, load_config, parse_config_text
from vilenkin.config import BASE_TOLERANCES, KNOWN_CHECKS, tolerances_for

MINIMAL = """
[group]
matrix = [[2, 1], [-1, 1]]

[mask]
order = 3
xi = [1, 2, 2, 1, 1]
"""


def test_minimal_config_fills_defaults():
    config = parse_config_text(MINIMAL)
    assert config.matrix == [[2, 1], [-1, 1]]
    assert config.digits is None
    assert config.order == 3
    assert config.xi == [1, 2, 2, 1, 1]
    assert config.signs is None
    assert config.checks == list(KNOWN_CHECKS)
    assert config.tolerance_scale == 1.0
    assert config.output_dir == "artifacts"


def test_full_config_round_trips_every_field():
    config = parse_config_text(
        """
[group]
matrix = [[3]]
digits = [[0], [1], [2]]
dual_digits = [[0], [1], [2]]

[mask]
order = 2
values = [1.0, 0.0, 0.0, [0.0, 1.0], 0.0, 0.0, 0.0, 0.0, 1.0]
support_exponent = 1

[checks]
run = ["mask_orthogonality", "polyphase"]
tolerance_scale = 10.0

[output]
directory = "out"
"""
    )
    assert config.digits == [[0], [1], [2]]
    assert config.xi is None
    assert config.mask_values[3] == 1j
    assert config.support_exponent == 1
    assert config.checks == ["mask_orthogonality", "polyphase"]
    assert tolerances_for(config) == {
        "mask_orthogonality": BASE_TOLERANCES["mask_orthogonality"] * 10.0,
        "polyphase": BASE_TOLERANCES["polyphase"] * 10.0,
    }
    assert config.output_dir == "out"


def test_direct_values_default_to_compact_support():
    config = parse_config_text(
        """
[group]
matrix = [[2]]

[mask]
order = 1
values = [0.7071067811865476, 0.7071067811865476]
"""
    )
    assert config.support_exponent == 0
    assert np.allclose(config.mask_values, np.full(2, np.sqrt(0.5)))


def test_config_error_messages_name_the_field():
    cases = (
        ("[mask]\norder = 3\nxi = [1, 2]", "group"),
        ("[group]\nmatrix = [[3]]\n[mask]\nxi = [1, 2]", "order"),
        ("[group]\nmatrix = [[3]]\n[mask]\norder = 3\n", "exactly one"),
        (
            "[group]\nmatrix = [[3]]\n[mask]\norder = 3\nxi = [1, 2]\nvalues = [1.0]",
            "exactly one",
        ),
        (
            "[group]\nmatrix = [[3]]\n[mask]\norder = 3\nvalues = [1.0]\nsigns = [1.0]",
            "signs",
        ),
        (
            "[group]\nmatrix = [[3]]\n[mask]\norder = 3\nxi = [1, -2, 1, 1]",
            r"xi\[1\]",
        ),
        (
            "[group]\nmatrix = [[3]]\n[mask]\norder = 3\nxi = [1, true, 1, 1]",
            r"xi\[1\]",
        ),
        (
            "[group]\nmatrix = [[3, 'a']]\n[mask]\norder = 3\nxi = [1, 2, 1, 1]",
            "matrix",
        ),
        (
            "[group]\nmatrix = [[3]]\n[mask]\norder = 3\nxi = [1, 2, 1, 1]\n[verify]\nrun = []",
            "unknown top-level",
        ),
        (
            "[group]\nmatrix = [[3]]\n[mask]\norder = 3\nxi = [1, 2, 1, 1]\n"
            "[checks]\nrun = ['gram', 'bogus']",
            "bogus",
        ),
        (
            "[group]\nmatrix = [[3]]\n[mask]\norder = 3\nxi = [1, 2, 1, 1]\n"
            "[checks]\ntolerance_scale = 0",
            "tolerance_scale",
        ),
    )
    for text, needle in cases:
        with pytest.raises(ConfigError, match=needle):
            parse_config_text(text)


def test_toml_syntax_errors_carry_line_information():
    with pytest.raises(ConfigError, match="line"):
        parse_config_text("[group\nmatrix = [[3]]")


def test_missing_config_file_is_reported(tmp_path):
    with pytest.raises(ConfigError, match="no_such"):
        load_config(str(tmp_path / "no_such.toml"))
