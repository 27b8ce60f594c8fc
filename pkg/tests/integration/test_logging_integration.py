import json
from pathlib import Path
import pytest
from loguru import logger

from suzukicartier.utils.errors import CorruptHeaderError, EnumerationCapError
from suzukicartier.utils.logging_utils import log_config_loaded, log_stage, setup_logging

class TestLoggingIntegration:
    def test_file_logging_setup(self, tmp_path: Path):
        """Test logging setup with file output."""
        log_file = tmp_path / "test.log"
        setup_logging(
            log_level="DEBUG",
            log_file=log_file,
            rotation="1 MB"
        )

        test_message = "Test log message"
        logger.debug(test_message)

        # Verify log file exists and contains the message
        assert log_file.exists()
        log_content = log_file.read_text()
        assert test_message in log_content

        # Verify JSON structure - parse each line separately
        test_log_entry = None
        for line in log_content.strip().split('\n'):
            if line.strip():
                entry = json.loads(line)
                if test_message in entry.get("text", ""):
                    test_log_entry = entry
                    break

        assert test_log_entry is not None, "Test message not found in log entries"
        assert "record" in test_log_entry
        assert "time" in test_log_entry["record"]
        assert "level" in test_log_entry["record"]
        assert test_log_entry["record"]["message"] == test_message

    def test_config_loaded_logging(self, tmp_path: Path, capsys):
        """Test configuration loaded logging with sections."""
        setup_logging()
        test_path = tmp_path / "config.yaml"
        test_sections = ["logging", "compute"]

        log_config_loaded(test_path, test_sections)

        captured = capsys.readouterr()
        assert str(test_path) in captured.err
        for section in test_sections:
            assert section in captured.err
        assert captured.out == ""

    def test_stage_logging(self, tmp_path: Path):
        """Stage records carry the run id and figures as structured extras."""
        log_file = tmp_path / "stages.log"
        setup_logging(log_level="INFO", log_file=log_file)

        log_stage("run-1", "MATRIX", m=1, source="computed")

        entries = [json.loads(line) for line in log_file.read_text().splitlines() if line.strip()]
        stage = next(e for e in entries if e["record"]["message"] == "Stage complete: MATRIX")
        assert stage["record"]["extra"]["run_id"] == "run-1"
        assert stage["record"]["extra"]["source"] == "computed"

    def test_error_logging_with_context(self, capsys):
        """Raising a package error logs its message and context."""
        setup_logging()
        error = CorruptHeaderError("Cache file has a bad magic", context={"path": "/tmp/x.szcm"})

        captured = capsys.readouterr()
        assert "Cache file has a bad magic" in captured.err
        assert "CorruptHeaderError" in captured.err
        assert "/tmp/x.szcm" in captured.err
        assert error.context["path"] == "/tmp/x.szcm"

    def test_error_message_with_braces(self, capsys):
        """Messages are passed as data, so braces are not format fields."""
        setup_logging()
        EnumerationCapError("Cap of {cap} exceeded", count=10 ** 40, free_gaps=3, cap=1)
        captured = capsys.readouterr()
        assert "Cap of {cap} exceeded" in captured.err
        assert str(10 ** 40) in captured.err

    @pytest.mark.parametrize("level, hidden, shown", [
        ("WARNING", ["Debug message", "Info message"], ["Warning message", "Error message"]),
        ("ERROR", ["Warning message"], ["Error message"]),
    ])
    def test_log_level_propagation(self, capsys, level, hidden, shown):
        """Test log level propagation across handlers."""
        setup_logging(log_level=level)

        logger.debug("Debug message")
        logger.info("Info message")
        logger.warning("Warning message")
        logger.error("Error message")

        captured = capsys.readouterr()
        for message in hidden:
            assert message not in captured.err
        for message in shown:
            assert message in captured.err
