import pytest

from aebsim.config import (
    ConfigError,
    build_config,
    echo_config,
    load_config,
    parse_config,
    parse_speed,
)
from aebsim.control import AdjustedBraking, SideCameraFusion, ThresholdConstant
from aebsim.perception import DetectionMode
from aebsim.scenario import preset_config


class TestParseSpeed:
    @pytest.mark.parametrize("text,expected", [
        ("85 kmh", 85.0 / 3.6),
        ("85 km/h", 85.0 / 3.6),
        ("85kmh", 85.0 / 3.6),
        ("23.6 m/s", 23.6),
        ("10 mps", 10.0),
        ("12.5", 12.5),
    ])
    def test_accepted_forms(self, text, expected):
        assert parse_speed(text) == pytest.approx(expected, rel=1e-12)

    def test_unknown_unit_rejected(self):
        with pytest.raises(ValueError, match="unit"):
            parse_speed("85 furlongs")

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            parse_speed("-5 kmh")


class TestDefaults:
    def test_no_file_equals_preset_defaults(self):
        assert load_config(None) == preset_config()

    def test_flag_overrides(self):
        config = load_config(None, preset="Town03_Far", attack="chen",
                             controller="adjusted", seed=9)
        assert config.preset_name == "Town03_Far"
        assert config.attack.name == "chen"
        assert isinstance(config.controller, AdjustedBraking)
        assert config.seed == 9


class TestFileParsing:
    def test_full_file(self, tmp_path):
        path = tmp_path / "scenario.ini"
        path.write_text(
            "[scenario]\n"
            "preset = Town10_Near\n"
            "attack = eykholt\n"
            "controller = fusion-adjusted\n"
            "target_speed = 72 kmh\n"
            "detection_mode = stochastic\n"
            "seed = 123\n"
            "\n"
            "[controller]\n"
            "multiplier = 0.8\n"
            "standoff = 6.0\n"
            "\n"
            "[dynamics]\n"
            "dt = 0.02\n"
        )
        config = load_config(str(path))
        assert config.preset_name == "Town10_Near"
        assert config.attack.name == "eykholt"
        assert isinstance(config.controller, SideCameraFusion)
        assert config.controller.inner.multiplier == 0.8
        assert config.controller.inner.standoff == 6.0
        assert config.v_target == pytest.approx(20.0)
        assert config.detection_mode is DetectionMode.STOCHASTIC
        assert config.seed == 123
        assert config.dynamics.dt == 0.02

    def test_flags_beat_file(self, tmp_path):
        path = tmp_path / "scenario.ini"
        path.write_text("[scenario]\nattack = chen\nseed = 5\n")
        config = load_config(str(path), attack="luv2", seed=77)
        assert config.attack.name == "luv2"
        assert config.seed == 77

    def test_preset_sets_lateral_offset(self):
        config = load_config(None, preset="Town03_Far")
        assert config.scene.lateral_offset == 4.0

    def test_scene_section_beats_preset(self, tmp_path):
        path = tmp_path / "scenario.ini"
        path.write_text("[scenario]\npreset = Town03_Far\n"
                        "[scene]\nlateral_offset = 1.5\n")
        config = load_config(str(path))
        assert config.scene.lateral_offset == 1.5

    def test_visibility_modifier_scales_range(self):
        config = load_config(None, preset="Town03_Far")
        assert config.front_camera.max_range == pytest.approx(54.0)

    def test_explicit_range_is_absolute(self, tmp_path):
        path = tmp_path / "scenario.ini"
        path.write_text("[scenario]\npreset = Town03_Far\n"
                        "[front_camera]\nmax_range = 70\n")
        config = load_config(str(path))
        assert config.front_camera.max_range == 70.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            parse_config(str(tmp_path / "nope.ini"))


class TestSchemaErrors:
    def test_unknown_section(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\nseed = 1\n[wheels]\ncount = 4\n")
        with pytest.raises(ConfigError, match=r"unknown section \[wheels\]"):
            load_config(str(path))

    def test_unknown_key_reports_location(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\nbogus_key = 1\n")
        with pytest.raises(ConfigError) as exc_info:
            load_config(str(path))
        err = exc_info.value
        assert "bogus_key" in str(err)
        assert err.path == str(path)
        assert err.line == 2

    def test_bad_value_reports_location(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\nseed = not_a_number\n")
        with pytest.raises(ConfigError) as exc_info:
            load_config(str(path))
        assert exc_info.value.line == 2

    def test_invalid_scene_rejected(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[scene]\ns_sign = -5\n")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_fusion_with_side_disabled_rejected(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\ncontroller = fusion-constant\n"
                        "[side_camera]\nenabled = false\n")
        with pytest.raises(ConfigError, match="side camera"):
            load_config(str(path))


class TestCustomAttack:
    def test_custom_profile(self, tmp_path):
        path = tmp_path / "scenario.ini"
        path.write_text("[scenario]\nattack = custom\n"
                        "[attack]\nconfidence_scale = 0.9\nrange_scale = 0.5\n")
        config = load_config(str(path))
        assert config.attack.name == "custom"
        assert config.attack.confidence_scale == 0.9
        assert config.attack.range_scale == 0.5

    def test_custom_requires_both_scales(self, tmp_path):
        path = tmp_path / "scenario.ini"
        path.write_text("[scenario]\nattack = custom\n"
                        "[attack]\nconfidence_scale = 0.9\n")
        with pytest.raises(ConfigError, match="range_scale"):
            load_config(str(path))

    def test_scales_override_named_attack(self, tmp_path):
        path = tmp_path / "scenario.ini"
        path.write_text("[scenario]\nattack = luv2\n"
                        "[attack]\nrange_scale = 0.4\n")
        config = load_config(str(path))
        assert config.attack.range_scale == 0.4
        assert config.attack.confidence_scale == 0.76


class TestEcho:
    def test_echo_is_a_fixed_point(self, tmp_path):
        config = load_config(None, preset="Town10_Near", attack="yang",
                             controller="fusion-adjusted", seed=31)
        text = echo_config(config)
        path = tmp_path / "echo.ini"
        path.write_text(text)
        reparsed = load_config(str(path))
        assert reparsed == config
        assert echo_config(reparsed) == text

    def test_echo_covers_every_section(self):
        text = echo_config(load_config(None))
        for section in ("[scenario]", "[scene]", "[front_camera]",
                        "[side_camera]", "[attack]", "[controller]",
                        "[perception]", "[cruise]", "[dynamics]"):
            assert section in text
