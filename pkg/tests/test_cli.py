from __future__ import annotations

import pytest
from click.testing import CliRunner

from intentrunner.backends import FixtureSet
from intentrunner.cli import main

INTENTION_1 = "Please send my car title to my insurance company"


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def write_fixture(tmp_path, source, intention=1, trial=1):
    fixtures = FixtureSet(tmp_path)
    fixtures.write(intention, trial, source, 1.0, 2.0)
    return str(tmp_path)


class TestRun:
    def test_golden_run(self, runner, golden_code, golden_trace):
        result = runner.invoke(main, ["run", INTENTION_1, "--backend", "replay"])
        assert result.exit_code == 0
        assert golden_code.rstrip("\n") in result.output
        for line in golden_trace.splitlines():
            assert line in result.output
        assert "status: success" in result.output

    def test_empty_intention_is_config_error(self, runner):
        result = runner.invoke(main, ["run", "   "])
        assert result.exit_code == 2

    def test_consent_denied_is_classified_failure(self, runner, tmp_path):
        fixtures = write_fixture(tmp_path, 'shell("ls ~")\n')
        result = runner.invoke(
            main,
            ["run", "list files", "--fixtures", fixtures, "--consent", "auto-deny"],
        )
        assert result.exit_code == 1
        assert "PrivilegedDenied" in result.output

    def test_consent_allowed_succeeds(self, runner, tmp_path):
        fixtures = write_fixture(tmp_path, 'shell("ls ~")\n')
        result = runner.invoke(
            main,
            ["run", "list files", "--fixtures", fixtures, "--consent", "auto-allow"],
        )
        assert result.exit_code == 0
        assert 'Execute "shell" and arguments "ls ~"' in result.output

    def test_classified_parse_failure_exits_1(self, runner, tmp_path):
        fixtures = write_fixture(tmp_path, "def f():\n    pass\n")
        result = runner.invoke(main, ["run", "anything", "--fixtures", fixtures])
        assert result.exit_code == 1
        assert "Unsupported" in result.output

    def test_missing_fixture_dir_exits_2(self, runner, tmp_path):
        result = runner.invoke(
            main, ["run", "x", "--fixtures", str(tmp_path / "nope")]
        )
        assert result.exit_code == 2

    def test_trace_out_file(self, runner, tmp_path, golden_trace):
        out = tmp_path / "trace.txt"
        result = runner.invoke(
            main, ["run", INTENTION_1, "--out", str(out)]
        )
        assert result.exit_code == 0
        assert out.read_text() == golden_trace

    def test_step_limit_flag(self, runner, tmp_path):
        fixtures = write_fixture(tmp_path, "while True:\n    pass\n")
        result = runner.invoke(
            main, ["run", "loop", "--fixtures", fixtures, "--max-steps", "50"]
        )
        assert result.exit_code == 1
        assert "StepLimit" in result.output


class TestBench:
    def test_default_bench_markdown(self, runner):
        result = runner.invoke(main, ["bench"])
        assert result.exit_code == 0
        assert "| 1 | 5 | 3.31 | 466.0 |" in result.output
        assert "| 4 | 3 | 1.47 | 461.0 |" in result.output

    def test_bench_exit_zero_despite_failures(self, runner):
        result = runner.invoke(main, ["bench", "--format", "csv"])
        assert result.exit_code == 0
        assert "4,3,1.47,461.0" in result.output

    def test_bench_trials_one(self, runner):
        result = runner.invoke(main, ["bench", "--trials", "1", "--format", "jsonl"])
        assert result.exit_code == 0
        assert len(result.output.strip().splitlines()) == 4

    def test_bench_missing_fixtures_exits_2(self, runner, tmp_path):
        result = runner.invoke(
            main, ["bench", "--fixtures", str(tmp_path / "missing")]
        )
        assert result.exit_code == 2

    def test_bench_incomplete_fixtures_exits_2(self, runner, tmp_path):
        write_fixture(tmp_path, "pass\n")
        result = runner.invoke(main, ["bench", "--fixtures", str(tmp_path)])
        assert result.exit_code == 2

    def test_bench_report_files(self, runner, tmp_path):
        out = tmp_path / "report.md"
        result = runner.invoke(
            main,
            ["bench", "--format", "markdown", "--format", "csv", "--out", str(out)],
        )
        assert result.exit_code == 0
        assert (tmp_path / "report.md").exists()
        assert (tmp_path / "report.csv").exists()

    def test_bench_custom_corpus(self, runner, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("only intention\n")
        fixtures = write_fixture(tmp_path / "fx", 'play_voice("hi")\n')
        result = runner.invoke(
            main,
            [
                "bench", "--intentions", str(corpus), "--fixtures", fixtures,
                "--trials", "1", "--format", "csv",
            ],
        )
        assert result.exit_code == 0
        assert result.output.strip().splitlines()[-1].startswith("1,1,")

    def test_bench_mock_timing(self, runner):
        result = runner.invoke(
            main,
            [
                "bench", "--backend", "mock", "--trials", "1",
                "--mock-ttft", "5", "--mock-total", "20", "--format", "csv",
                "--intentions", "/dev/null",
            ],
        )
        # Empty corpus file is a config error, not a crash.
        assert result.exit_code == 2


class TestRenderPrompt:
    def test_golden_prompt_bytes(self, runner, golden_prompt):
        result = runner.invoke(main, ["render-prompt", INTENTION_1])
        assert result.exit_code == 0
        assert result.output == golden_prompt

    def test_matches_library_output(self, runner, stub_table, golden_prompt):
        from intentrunner.prompting import Intention, render_prompt

        body = render_prompt(Intention(INTENTION_1), stub_table).body
        result = runner.invoke(main, ["render-prompt", INTENTION_1])
        assert result.output == body == golden_prompt

    def test_empty_intention_exits_2(self, runner):
        result = runner.invoke(main, ["render-prompt", ""])
        assert result.exit_code == 2

    def test_custom_table(self, runner, tmp_path):
        table = tmp_path / "table.txt"
        table.write_text("function get_weather(city: String): String\n")
        result = runner.invoke(main, ["render-prompt", "weather?", "--table", str(table)])
        assert result.exit_code == 0
        assert "function get_weather(city: String): String" in result.output
        assert len(result.output.split("\n")) == 6

    def test_role_goes_to_stderr_only_with_flag(self, runner):
        plain = runner.invoke(main, ["render-prompt", "x"])
        assert "You are a Python 3 code generator" not in plain.output
        flagged = runner.invoke(main, ["render-prompt", "x", "--show-role"])
        assert "You are a Python 3 code generator" in flagged.stderr
        assert flagged.output == plain.output


class TestTrace:
    def test_dumps_ast(self, runner, tmp_path):
        source = tmp_path / "code.py"
        source.write_text("x = find_file_id(\"car title\")\n")
        result = runner.invoke(main, ["trace", str(source)])
        assert result.exit_code == 0
        assert "Assign target='x'" in result.output
        assert "Call callee='find_file_id'" in result.output

    def test_classified_error_exits_1(self, runner, tmp_path):
        source = tmp_path / "bad.py"
        source.write_text("def f():\n    pass\n")
        result = runner.invoke(main, ["trace", str(source)])
        assert result.exit_code == 1
        assert "unsupported construct" in result.stderr

    def test_missing_file_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["trace", str(tmp_path / "missing.py")])
        assert result.exit_code == 2


class TestRepl:
    def test_exit_command(self, runner):
        result = runner.invoke(main, ["repl"], input="exit\n")
        assert result.exit_code == 0

    def test_eof_quits(self, runner):
        result = runner.invoke(main, ["repl"], input="")
        assert result.exit_code == 0

    def test_decline_execution(self, runner):
        result = runner.invoke(
            main, ["repl"], input=f"{INTENTION_1}\nn\nexit\n"
        )
        assert result.exit_code == 0
        assert "skipped" in result.output
        assert "Execute" not in result.output

    def test_approve_execution_shows_trace(self, runner, golden_trace):
        result = runner.invoke(
            main, ["repl"], input=f"{INTENTION_1}\ny\nexit\n"
        )
        assert result.exit_code == 0
        for line in golden_trace.splitlines():
            assert line in result.output
        assert "status: success" in result.output

    def test_privileged_call_asks_and_denies(self, runner, tmp_path):
        fixtures = write_fixture(tmp_path, 'shell("rm -rf /")\n')
        result = runner.invoke(
            main,
            ["repl", "--fixtures", str(tmp_path)],
            input="wipe it\ny\nn\nexit\n",
        )
        assert result.exit_code == 0
        assert "allow privileged function 'shell'?" in result.output
        assert "PrivilegedDenied" in result.output

    def test_privileged_call_approved(self, runner, tmp_path):
        write_fixture(tmp_path, 'shell("ls")\n')
        result = runner.invoke(
            main,
            ["repl", "--fixtures", str(tmp_path)],
            input="list\ny\ny\nexit\n",
        )
        assert result.exit_code == 0
        assert 'Execute "shell" and arguments "ls"' in result.output
        assert "status: success" in result.output

    def test_error_keeps_loop_alive(self, runner, tmp_path):
        write_fixture(tmp_path, "pass\n")
        result = runner.invoke(
            main,
            ["repl", "--fixtures", str(tmp_path)],
            # Unknown intention -> slot (1, 1) exists; other errors printed.
            input="\nlist\nn\nexit\n",
        )
        assert result.exit_code == 0


class TestConfigFile:
    def test_config_file_and_flag_precedence(self, runner, tmp_path):
        config = tmp_path / "intentrunner.toml"
        fixtures = write_fixture(tmp_path / "fx", "def f():\n    pass\n")
        config.write_text(f"backend = replay\nfixtures = {fixtures}\n")
        result = runner.invoke(main, ["run", "x", "--config", str(config)])
        assert result.exit_code == 1  # fixture parsed, classified Unsupported
        assert "Unsupported" in result.output

    def test_unknown_key_rejected(self, runner, tmp_path):
        config = tmp_path / "c.toml"
        config.write_text("wibble = 1\n")
        result = runner.invoke(main, ["run", "x", "--config", str(config)])
        assert result.exit_code == 2

    def test_env_override(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("INTENTRUNNER_BACKEND", "nonsense")
        result = runner.invoke(main, ["run", "x"])
        assert result.exit_code == 2

    def test_bad_value_type(self, runner, tmp_path):
        config = tmp_path / "c.toml"
        config.write_text("trials = lots\n")
        result = runner.invoke(main, ["bench", "--config", str(config)])
        assert result.exit_code == 2
