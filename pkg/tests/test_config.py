import pytest

from gravnoise.config import (
    ExperimentConfig,
    override_config_text,
    parse_config,
    serialize_config,
)
from gravnoise.errors import ConfigError

MINIMAL_SLIT = """
[experiment]
kind = double-slit
seed = 42
output_dir = out
realizations = 4

[background]
mode_count = 8
strain_rms = 0.01
f_min = 0.5
f_max = 1.5
light_speed = 1.0

[geometry]
L1 = 10.0
L2 = 10.0
d = 4.0
screen_extent = 2.5

[slit]
wavelength = 0.5
speed = 0.8
"""

GAP = """
[experiment]
kind = derivation-gap
seed = 7
output_dir = out

[grid]
cells = 256
extent = 40.0
sigma0 = 1.0
s0 = 0.5

[evolution]
dt = 0.005
steps = 40
"""


def test_minimal_double_slit_parses_with_defaults():
    cfg = parse_config(MINIMAL_SLIT)
    assert cfg.kind == "double-slit"
    assert cfg.seed == 42
    assert cfg.geometry.w == 0.0
    assert cfg.geometry.screen_samples == 256
    assert cfg.slit.quadrature_points == 16
    assert cfg.slit.coupling == "amplitude"
    assert cfg.background.polarization_plus == 0.5
    echoed = serialize_config(cfg)
    assert "screen_samples = 256" in echoed
    assert "coupling = amplitude" in echoed


def test_negative_slit_separation_names_field():
    text = MINIMAL_SLIT.replace("d = 4.0", "d = -4.0")
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert any(e.startswith("geometry.d") for e in exc.value.errors)


def test_round_trip_is_stable():
    cfg = parse_config(MINIMAL_SLIT)
    text = serialize_config(cfg)
    again = parse_config(text)
    assert again == cfg
    assert serialize_config(again) == text


def test_unknown_key_and_section_rejected():
    with pytest.raises(ConfigError) as exc:
        parse_config(MINIMAL_SLIT.replace("[background]", "[background]\nwibble = 3"))
    assert any("background.wibble" in e for e in exc.value.errors)
    with pytest.raises(ConfigError) as exc:
        parse_config(MINIMAL_SLIT + "\n[diffraction]\nx = 1\n")
    assert any(e.startswith("diffraction") for e in exc.value.errors)
    with pytest.raises(ConfigError) as exc:
        parse_config(MINIMAL_SLIT + "\n[grid]\ncells = 64\n")
    assert any("not used by kind" in e for e in exc.value.errors)


def test_all_errors_collected_not_just_first():
    text = (
        MINIMAL_SLIT.replace("d = 4.0", "d = -4.0")
        .replace("f_min = 0.5", "f_min = -0.5")
        .replace("seed = 42", "seed = notanumber")
    )
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    joined = " ".join(exc.value.errors)
    assert "geometry.d" in joined
    assert "background.f_min" in joined
    assert "experiment.seed" in joined
    assert len(exc.value.errors) >= 3


def test_missing_required_key_lists_path():
    text = MINIMAL_SLIT.replace("wavelength = 0.5", "")
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert any(e.startswith("slit.wavelength") for e in exc.value.errors)


def test_derivation_gap_config_with_probability_section():
    cfg = parse_config(GAP)
    assert cfg.grid.s0 == 0.5
    assert cfg.probability is None

    via_model = GAP.replace("s0 = 0.5", "") + "\n[probability]\nsigma = 1.0\nmass = 1.0\n"
    cfg2 = parse_config(via_model)
    assert cfg2.probability.s0 == 0.5

    both = GAP + "\n[probability]\nsigma = 1.0\nmass = 1.0\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(both)
    assert any("grid.s0" in e for e in exc.value.errors)


def test_double_slit_needs_two_realizations():
    text = MINIMAL_SLIT.replace("realizations = 4", "realizations = 1")
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert any("realizations" in e for e in exc.value.errors)


def test_override_config_text():
    text = override_config_text(MINIMAL_SLIT, {"experiment.seed": "99"})
    assert parse_config(text).seed == 99
    with pytest.raises(ConfigError):
        override_config_text(MINIMAL_SLIT, {"nodots": "1"})


def test_background_statistics_defaults_sampling():
    text = """
[experiment]
kind = background-statistics
seed = 3
output_dir = out

[background]
mode_count = 4
strain_rms = 0.01
f_min = 0.5
f_max = 1.5
light_speed = 1.0
"""
    cfg = parse_config(text)
    assert cfg.sampling.n_points == 4096
    assert cfg.sampling.extent == 0.0
