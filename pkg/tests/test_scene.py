import math

import numpy as np
import pytest

from linepaint.scene import (
    ArmConfig,
    LineKinematics,
    PaintSegment,
    Panel,
    ScenarioConfig,
    ScenarioError,
    SyntheticSpec,
    VehicleScene,
    default_dummy_count,
    generate_synthetic_scene,
    load_scene,
    save_scene,
    scene_from_dict,
    scene_to_dict,
    segment_world_position,
    validate_scene,
)


def _minimal_scene(**overrides):
    kw = dict(
        name="toy",
        front_x=1000.0,
        panels=(Panel(1, "vertical_side", "mirror"),),
        segments=(
            PaintSegment(1, 1, (0.0, 400.0, -900.0), (900.0, 400.0, -900.0), 1),
            PaintSegment(2, 1, (0.0, 600.0, -900.0), (900.0, 600.0, -900.0), 2),
        ),
        arms=(
            ArmConfig(1, (500.0, 500.0, -1900.0), 2800.0, 1, "left", 2),
            ArmConfig(2, (500.0, 500.0, 1900.0), 2800.0, 1, "right", 1),
        ),
        line=LineKinematics(velocity=98.0),
        config=ScenarioConfig(n_d=2),
    )
    kw.update(overrides)
    return validate_scene(VehicleScene(**kw))


def test_world_translation_exact():
    # velocity 147 mm/s, tick 0.01 s, 100 ticks -> exactly 147 mm of drift
    line = LineKinematics(velocity=147.0)
    seg = PaintSegment(1, 1, (0.0, 0.0, 0.0), (100.0, 0.0, 0.0), 1)
    a0, _ = segment_world_position(seg, 0, line, mu=0.01, front_x=0.0)
    a100, _ = segment_world_position(seg, 100, line, mu=0.01, front_x=0.0)
    assert a100[0] - a0[0] == 147.0
    assert a100[1] == a0[1] and a100[2] == a0[2]


def test_world_offset_matches_segment_translation(desk):
    t = 321
    seg = desk.segment(1)
    a, b = segment_world_position(seg, t, desk.line, desk.config.mu, desk.front_x)
    off = desk.world_offset(t)
    assert a[0] == pytest.approx(seg.endpoint_a[0] + off)
    assert b[0] == pytest.approx(seg.endpoint_b[0] + off)


def test_yaml_round_trip(tmp_path, desk):
    path = tmp_path / "scene.yaml"
    save_scene(desk, path)
    back = load_scene(path)
    assert back == desk


def test_dict_round_trip(desk):
    assert scene_from_dict(scene_to_dict(desk)) == desk


def test_segment_ids_contiguous(desk):
    assert sorted(s.id for s in desk.segments) == list(range(1, desk.n_segs + 1))
    for panel in desk.panels:
        ids = desk.panel_segment_ids(panel.id)
        heights = [desk.segment(s).height_index for s in ids]
        assert heights == sorted(heights)


def test_generator_deterministic():
    spec = SyntheticSpec(seed=7, side_panel_segments=(5, 5, 5))
    a = generate_synthetic_scene(spec)
    b = generate_synthetic_scene(spec)
    assert a == b
    c = generate_synthetic_scene(SyntheticSpec(seed=8, side_panel_segments=(5, 5, 5)))
    assert a != c


def test_validation_duplicate_segment_id():
    seg = PaintSegment(1, 1, (0.0, 400.0, -900.0), (900.0, 400.0, -900.0), 1)
    with pytest.raises(ScenarioError):
        _minimal_scene(segments=(seg, seg))


def test_validation_zero_length_segment():
    segs = (
        PaintSegment(1, 1, (0.0, 400.0, -900.0), (0.0, 400.0, -900.0), 1),
        PaintSegment(2, 1, (0.0, 600.0, -900.0), (900.0, 600.0, -900.0), 2),
    )
    with pytest.raises(ScenarioError):
        _minimal_scene(segments=segs)


def test_validation_noncontiguous_heights():
    segs = (
        PaintSegment(1, 1, (0.0, 400.0, -900.0), (900.0, 400.0, -900.0), 1),
        PaintSegment(2, 1, (0.0, 600.0, -900.0), (900.0, 600.0, -900.0), 3),
    )
    with pytest.raises(ScenarioError):
        _minimal_scene(segments=segs)


def test_validation_mirror_pairing():
    arms = (
        ArmConfig(1, (500.0, 500.0, -1900.0), 2800.0, 1, "left", 1),
        ArmConfig(2, (500.0, 500.0, 1900.0), 2800.0, 1, "right", 2),
    )
    with pytest.raises(ScenarioError):
        _minimal_scene(arms=arms)


def test_validation_side_panel_must_mirror():
    with pytest.raises(ScenarioError):
        _minimal_scene(panels=(Panel(1, "vertical_side", "parallel"),))


def test_validation_rejects_nonpositive_radius():
    arms = (
        ArmConfig(1, (500.0, 500.0, -1900.0), 0.0, 1, "left", 2),
        ArmConfig(2, (500.0, 500.0, 1900.0), 0.0, 1, "right", 1),
    )
    with pytest.raises(ScenarioError):
        _minimal_scene(arms=arms)


def test_load_rejects_bad_version(tmp_path, desk):
    doc = scene_to_dict(desk)
    doc["format_version"] = 999
    with pytest.raises(ScenarioError):
        scene_from_dict(doc)


def test_default_dummy_count():
    assert default_dummy_count(60, 3) == 30
    for n_segs in (7, 30, 61, 268):
        for n_arms in (1, 2, 3, 4):
            n_d = default_dummy_count(n_segs, n_arms)
            assert (n_segs + n_d) % n_arms == 0
            assert n_d >= math.ceil(n_segs / 2)


def test_segment_length():
    seg = PaintSegment(1, 1, (0.0, 0.0, 0.0), (3.0, 4.0, 0.0), 1)
    assert seg.length() == 5.0


def test_left_arms_sorted_by_row(desk):
    rows = [a.row for a in desk.left_arms()]
    assert rows == sorted(rows)
    assert all(a.side == "left" for a in desk.left_arms())
