from pathlib import Path

import pytest
from loguru import logger
from pydantic import ValidationError

from suzukicartier.config.models import (
    Command,
    ComputeConfig,
    ConfigModel,
    LoggingConfig,
    OutputFormat,
    RunConfig,
)


class TestLoggingConfig:
    def test_defaults(self):
        config = LoggingConfig()
        assert config.level == "info"
        assert config.file is None
        assert config.rotation == "200mb"
        assert config.loguru_rotation == "200 MB"

    def test_rotation_is_normalised(self):
        config = LoggingConfig(rotation="1GB")
        assert config.rotation == "1gb"
        assert config.loguru_rotation == "1 GB"

    def test_invalid_rotation(self):
        with pytest.raises(ValidationError) as exc_info:
            LoggingConfig(rotation="invalid")
        assert "Log rotation must be specified in bytes" in str(exc_info.value)

    def test_invalid_level(self):
        with pytest.raises(ValidationError) as exc_info:
            LoggingConfig(level="verbose")
        errors = exc_info.value.errors()
        assert len(errors) == 1
        assert "level" in errors[0]["loc"]


class TestComputeConfig:
    def test_defaults(self):
        config = ComputeConfig()
        assert config.parallelism == 1
        assert config.cache_dir is None
        assert config.enumerate_cap == 10 ** 6
        assert config.max_matrix_m == 4
        assert config.oracle_max_m == 2
        assert config.point_bits_limit == 24

    def test_invalid_parallelism(self):
        with pytest.raises(ValidationError) as exc_info:
            ComputeConfig(parallelism=0)
        errors = exc_info.value.errors()
        assert len(errors) == 1
        assert "parallelism" in errors[0]["loc"]
        assert "greater than 0" in errors[0]["msg"]

    def test_point_bits_limit_ceiling(self):
        with pytest.raises(ValidationError) as exc_info:
            ComputeConfig(point_bits_limit=25)
        assert "point_bits_limit" in exc_info.value.errors()[0]["loc"]

    def test_cache_dir_is_path(self):
        assert ComputeConfig(cache_dir="/tmp/szcm").cache_dir == Path("/tmp/szcm")


class TestConfigModel:
    def test_every_section_optional(self):
        config = ConfigModel.model_validate({})
        assert config.logging == LoggingConfig()
        assert config.compute == ComputeConfig()

    def test_full(self, valid_config_dict):
        config = ConfigModel.model_validate(valid_config_dict)
        assert config.logging.level == "debug"
        assert config.compute.parallelism == 2
        assert config.compute.oracle_max_m == 1


class TestCommand:
    @pytest.mark.parametrize("command", [Command.PARAMS, Command.BASIS, Command.POINTS])
    def test_without_matrix(self, command):
        assert not command.needs_matrix

    def test_runs_verification(self):
        assert {c for c in Command if c.runs_verification} == {Command.VERIFY, Command.ALL}

    @pytest.mark.parametrize("command", [
        Command.A_NUMBER,
        Command.MATRIX,
        Command.RANK_PROFILE,
        Command.EO_CONSTRAINTS,
        Command.EO_ENUMERATE,
        Command.VERIFY,
        Command.ALL,
    ])
    def test_with_matrix(self, command):
        assert command.needs_matrix

    def test_values(self):
        assert Command("a-number") is Command.A_NUMBER
        assert OutputFormat("csv") is OutputFormat.CSV


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig(m=1, command=Command.PARAMS)
        assert config.format is OutputFormat.PRETTY
        assert config.ks == (1, 2, 4)
        assert config.verify_oracle
        assert config.workers == 1
        assert config.enumerate_cap == 10 ** 6

    def test_overrides(self):
        config = RunConfig(
            m=1,
            command=Command.EO_ENUMERATE,
            parallelism=3,
            cap=10,
            compute=ComputeConfig(parallelism=2, enumerate_cap=1000)
        )
        assert config.workers == 3
        assert config.enumerate_cap == 10

    def test_file_values_used_without_flags(self):
        config = RunConfig(m=1, command=Command.VERIFY, compute=ComputeConfig(parallelism=2, enumerate_cap=7))
        assert config.workers == 2
        assert config.enumerate_cap == 7

    @pytest.mark.parametrize("m", [0, -3])
    def test_invalid_m(self, m):
        with pytest.raises(ValidationError) as exc_info:
            RunConfig(m=m, command=Command.PARAMS)
        assert "m" in exc_info.value.errors()[0]["loc"]

    def test_ks_sorted_and_deduplicated(self):
        assert RunConfig(m=1, command=Command.POINTS, ks=(4, 1, 4)).ks == (1, 4)

    @pytest.mark.parametrize("ks", [(), (0,), (1, -2)])
    def test_invalid_ks(self, ks):
        with pytest.raises(ValidationError) as exc_info:
            RunConfig(m=1, command=Command.POINTS, ks=ks)
        assert "Extension degrees k must be positive" in str(exc_info.value)

    def test_matrix_bound(self):
        with pytest.raises(ValidationError) as exc_info:
            RunConfig(m=5, command=Command.A_NUMBER)
        assert "--allow-large-m" in str(exc_info.value)

    def test_matrix_bound_override(self):
        config = RunConfig(m=5, command=Command.A_NUMBER, allow_large_m=True)
        assert config.m == 5

    def test_matrix_bound_ignores_formula_commands(self):
        assert RunConfig(m=9, command=Command.PARAMS).m == 9
        assert RunConfig(m=9, command=Command.POINTS).m == 9

    def test_oracle_disabled_for_large_m(self):
        config = RunConfig(m=3, command=Command.VERIFY)
        assert not config.verify_oracle

    def test_oracle_warning_only_when_verifying(self):
        messages = []
        handler = logger.add(messages.append, level="WARNING", format="{message}")
        try:
            params_config = RunConfig(m=3, command=Command.PARAMS)
            assert messages == []
            RunConfig(m=3, command=Command.ALL)
        finally:
            logger.remove(handler)
        assert params_config.verify_oracle
        assert len(messages) == 1
        assert "Oracle verification disabled" in messages[0]

    def test_force_oracle(self):
        config = RunConfig(m=3, command=Command.VERIFY, force_oracle=True)
        assert config.verify_oracle

    def test_oracle_bound_from_file(self):
        config = RunConfig(m=2, command=Command.VERIFY, compute=ComputeConfig(oracle_max_m=1))
        assert not config.verify_oracle
