from datetime import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from solar_markov.config import (
    RunConfig,
    apply_overrides,
    dump_config,
    load_config,
    parse_config_text,
)
from solar_markov.discretize import SolarState
from solar_markov.errors import ConfigError


def from_text(text):
    return apply_overrides(RunConfig(), parse_config_text(text))


class TestParse:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.thresholds.edges.tolist() == [200, 450, 500]
        assert cfg.plan.total_slots == 180
        assert cfg.fit_on == "repday" and cfg.carry == "distribution"
        assert cfg.model_dir == "out"

    def test_file_values(self):
        cfg = from_text(
            """
            # comment
            data = july.csv   # trailing comment
            threshold.lr = 150
            plan.boundaries = 06:00, 09:00, 12:00
            fit.on = pooled
            generate.strict_alg1 = yes
            generate.initial = VH
            """
        )
        assert cfg.data == "july.csv"
        assert cfg.threshold_lr == 150.0
        assert cfg.plan_preset is None
        assert cfg.plan.boundaries == [time(6), time(9), time(12)]
        assert cfg.strict_alg1 is True
        assert cfg.initial_state == SolarState.VERY_HIGH

    @pytest.mark.parametrize(
        "text, message",
        [
            ("colour = red", "unknown key"),
            ("data = a\ndata = b", "duplicate"),
            ("no equals sign", "key = value"),
            ("threshold.lr = lots", "threshold.lr"),
            ("generate.strict_alg1 = maybe", "boolean"),
            ("plan.preset = summer-paper\nplan.boundaries = 06:00,07:00", "exactly one"),
            ("plan.preset = autumn", "unknown plan preset"),
            ("threshold.lr = 600", "lr"),
            ("fit.on = weekly", "fit.on"),
            ("generate.carry = nothing", "carry"),
            ("test.significance = 1.5", "significance"),
            ("generate.initial = X", "state"),
            ("plan.boundaries = 06:00,06:07", "slots"),
        ],
    )
    def test_errors(self, text, message):
        with pytest.raises(ConfigError, match=message):
            from_text(text)

    def test_override_switches_plan_source(self):
        cfg = from_text("plan.boundaries = 06:00,07:00")
        cfg = apply_overrides(cfg, {"plan.preset": "winter-paper"})
        assert cfg.plan_boundaries is None and cfg.plan.total_slots == 144

    def test_model_dir_prefers_model(self):
        assert from_text("out = a\nmodel = b").model_dir == "b"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "none.cfg")

    def test_load_file(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("sample.seed = 42\n")
        assert load_config(p).seed == 42


_cfg = st.builds(
    RunConfig,
    data=st.none() | st.sampled_from(["a.csv", "dir/b.csv"]),
    threshold_lr=st.floats(1, 199, allow_nan=False),
    smoothing=st.floats(0, 5, allow_nan=False),
    fit_on=st.sampled_from(["repday", "pooled"]),
    carry=st.sampled_from(["distribution", "state"]),
    strict_alg1=st.booleans(),
    seed=st.integers(0, 2**31),
    initial=st.none() | st.sampled_from(["L", "M", "H", "VH"]),
    significance=st.floats(0.001, 0.5, allow_nan=False),
)


@given(_cfg)
def test_dump_round_trip(cfg):
    assert from_text(dump_config(cfg)) == cfg


def test_dump_round_trip_with_boundaries():
    cfg = from_text("plan.boundaries = 05:00,08:00,11:00\nplan.slot_minutes = 10")
    assert from_text(dump_config(cfg)) == cfg
