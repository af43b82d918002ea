import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from enzpair.config import FIGURE_PRESETS, build_config, parse_config, serialize
from enzpair.dispersion import ConstantIndexMaterial, DrudeLorentzMaterial
from enzpair.errors import ParseError, ValidationError

C = 299_792_458.0


def test_fig2_preset():
    cfg = parse_config("", preset="fig2")
    assert cfg.scenario.kind == "nondispersive"
    assert cfg.material_obj() == ConstantIndexMaterial(1.0)
    assert cfg.pulse.delta_r == 1e-3
    assert cfg.pulse.tau_fs == (2.0, 5.0, 20.0)
    assert cfg.taus == pytest.approx([2e-15, 5e-15, 20e-15])


@pytest.mark.parametrize("name,kind", [("fig4", "enz_real_only"), ("fig5", "enz_full")])
def test_enz_presets(name, kind):
    cfg = parse_config(f"preset: {name}\n")
    assert cfg.scenario.kind == kind
    assert isinstance(cfg.material_obj(), DrudeLorentzMaterial)
    assert cfg.pulse.delta_r == 1.0
    g = cfg.grid_for(5e-15)
    assert (g.lambda_min, g.lambda_max, g.n_points) == pytest.approx((800e-9, 2400e-9, 200))


def test_preset_override():
    cfg = parse_config("pulse: {tau_fs: [7]}\n", preset="fig4")
    assert cfg.pulse.tau_fs == (7.0,)
    assert cfg.scenario.kind == "enz_real_only"


def test_empty_document_requires_kind():
    with pytest.raises(ValidationError) as info:
        parse_config("")
    assert info.value.key == "scenario.kind"


def test_negative_tau():
    with pytest.raises(ValidationError) as info:
        parse_config("scenario: {kind: enz_full}\npulse: {tau_fs: -5}\n")
    assert info.value.key == "pulse.tau_fs"


@pytest.mark.parametrize(
    "text,key",
    [
        ("scenario: {kind: enz_full}\npulse: {tua_fs: 5}\n", "pulse.tua_fs"),
        ("scenario: {kind: enz_full}\nsolvr: {}\n", "solvr"),
        ("scenario: {kind: warp}\n", "scenario.kind"),
        ("scenario: {kind: enz_full}\nmaterial: {n0: 1.5}\n", "material.n0"),
        ("scenario: {kind: nondispersive}\nmaterial: {preset: ito-luk2015}\n", "material"),
        ("scenario: {kind: enz_full}\nmaterial: {eps_inf: 4}\n", "material.gamma"),
        ("scenario: {kind: enz_full}\nmaterial: {eps_inf: 0.5, omega_p_sq: 1e30, gamma: 0}\n", "material.eps_inf"),
        ("scenario: {kind: enz_full}\ngrid: {n_points: 1}\n", "grid.n_points"),
        ("scenario: {kind: enz_full}\ngrid: {lambda_min_nm: 900, lambda_max_nm: 800}\n", "grid.lambda_max_nm"),
        ("scenario: {kind: enz_full}\nsolver: {window_factor: 5}\n", "solver.window_factor"),
        ("scenario: {kind: enz_full}\nsolver: {rtol: fast}\n", "solver.rtol"),
        ("scenario: {kind: enz_full}\ngeometry: {damping_factor: 2}\n", "geometry.damping_factor"),
        ("scenario: {kind: enz_full, form: linearized}\n", "scenario.form"),
        ("preset: fig9\n", "preset"),
    ],
)
def test_validation_errors(text, key):
    with pytest.raises(ValidationError) as info:
        parse_config(text)
    assert info.value.key == key


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_config("scenario:\n  kind: [enz_full\n")
    assert info.value.line is not None and info.value.column is not None


def test_non_mapping_document():
    with pytest.raises(ParseError):
        parse_config("- 1\n- 2\n")


def test_json_is_accepted():
    cfg = parse_config('{"scenario": {"kind": "enz_full"}, "pulse": {"tau_fs": [2, 5]}}')
    assert cfg.pulse.tau_fs == (2.0, 5.0)


def test_defaults_are_recorded():
    cfg = parse_config("scenario: {kind: enz_full}\n")
    assert "pulse.delta_r" in cfg.defaults_applied
    assert "geometry.damping_factor" in cfg.defaults_applied
    assert "scenario.kind" not in cfg.defaults_applied
    assert cfg.geometry.damping_factor == pytest.approx(math.exp(-2))


def test_nondispersive_grid_in_k():
    cfg = parse_config("", preset="fig2")
    tau = 5e-15
    k = cfg.grid_for(tau).wavenumbers()
    assert k[0] * C * tau == pytest.approx(0.1, rel=1e-12)
    assert k[-1] * C * tau == pytest.approx(20.0, rel=1e-12)


@pytest.mark.parametrize("name", sorted(FIGURE_PRESETS))
def test_round_trip_presets(name):
    cfg = parse_config("", preset=name)
    again = parse_config(serialize(cfg))
    assert again == cfg
    assert again.hash() == cfg.hash()


def test_hash_ignores_output_and_tracks_physics():
    a = parse_config("scenario: {kind: enz_full}\n")
    b = parse_config("scenario: {kind: enz_full}\noutput: {path: x.csv}\n")
    c = parse_config("scenario: {kind: enz_full}\npulse: {delta_r: 0.5}\n")
    assert a.hash() == b.hash() != c.hash()


@settings(max_examples=60, deadline=None)
@given(
    kind=st.sampled_from(["nondispersive", "enz_real_only", "enz_full"]),
    taus=st.lists(st.floats(0.5, 100.0), min_size=1, max_size=4),
    delta=st.floats(0.0, 2.0),
    n_points=st.integers(2, 500),
    rtol=st.floats(1e-13, 1e-6),
    damping=st.floats(1e-3, 1.0),
)
def test_round_trip_random(kind, taus, delta, n_points, rtol, damping):
    doc = {
        "scenario": {"kind": kind},
        "pulse": {"tau_fs": taus, "delta_r": delta},
        "grid": {"n_points": n_points},
        "solver": {"rtol": rtol},
        "geometry": {"damping_factor": damping},
    }
    cfg = build_config(doc)
    assert parse_config(serialize(cfg)) == cfg
