import json
import re
import subprocess
import socket
import sys
import time
import urllib.request


from hysim.cli import main


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestParseCommand:
    def test_reference_file(self, acc_path, capsys):
        assert main(["parse", acc_path]) == 0
        out = capsys.readouterr().out
        assert out.startswith("(program")
        assert "(while" in out and "(ode" in out

    def test_empty_file(self, tmp_path, capsys):
        path = write(tmp_path, "empty.lince", "")
        assert main(["parse", path]) == 0
        assert capsys.readouterr().out.strip() == "(program)"

    def test_syntax_error_exits_1(self, tmp_path, capsys):
        path = write(tmp_path, "bad.lince", "x := ;")
        assert main(["parse", path]) == 1
        err = capsys.readouterr().err
        assert "line 1" in err and "col 6" in err

    def test_missing_file_exits_1(self, capsys):
        assert main(["parse", "/nonexistent/file.lince"]) == 1

    def test_internal_error_exits_2(self, acc_path, capsys, monkeypatch):
        monkeypatch.setattr("hysim.cli.parse",
                            lambda _: (_ for _ in ()).throw(RuntimeError()))
        assert main(["parse", acc_path]) == 2


class TestRunCommand:
    def test_reference_batch(self, acc_path, tmp_path):
        out = str(tmp_path / "trace.json")
        assert main(["run", acc_path, "--out", out]) == 0
        data = json.loads(open(out).read())
        assert data["config"] == {"maxTime": 30.0, "sampleEvery": 0.1,
                                  "odeStep": 0.01}
        assert len(data["runs"]) == 7
        assert data["runs"][0]["variant"] == {"al": -3.0}
        assert all(r["status"] == "completed" for r in data["runs"])

    def test_no_array_file_single_run(self, tmp_path):
        path = write(tmp_path, "one.lince", "x := 0; x' = 1 for 1;")
        out = str(tmp_path / "trace.json")
        assert main(["run", path, "--out", out]) == 0
        data = json.loads(open(out).read())
        assert len(data["runs"]) == 1
        assert data["runs"][0]["variant"] == {}

    def test_cruise_has_five_runs(self, cruise_path, tmp_path):
        out = str(tmp_path / "trace.json")
        assert main(["run", cruise_path, "--max-time", "10",
                     "--out", out]) == 0
        assert len(json.loads(open(out).read())["runs"]) == 5

    def test_csv_format(self, tmp_path):
        path = write(tmp_path, "two.lince",
                     "a := [1, 2]; x := 0; x' = a for 1;")
        out = str(tmp_path / "trace.csv")
        assert main(["run", path, "--max-time", "2", "--sample", "0.5",
                     "--format", "csv", "--out", out]) == 0
        lines = open(out).read().splitlines()
        assert lines[0] == "index,t,a,x"
        assert len(lines) == 1 + 2 * 3   # header + 2 runs x 3 samples

    def test_failed_runs_still_exit_0(self, tmp_path):
        path = write(tmp_path, "fail.lince", "a := [1, 2]; x := sqrt(0 - 1);")
        out = str(tmp_path / "trace.json")
        assert main(["run", path, "--out", out]) == 0
        data = json.loads(open(out).read())
        assert all(r["status"] == "failed" for r in data["runs"])
        assert all("sqrt" in r["error"] for r in data["runs"])

    def test_byte_identical_reruns(self, acc_path, tmp_path):
        first = str(tmp_path / "a.json")
        second = str(tmp_path / "b.json")
        assert main(["run", acc_path, "--out", first]) == 0
        assert main(["run", acc_path, "--out", second]) == 0
        assert open(first, "rb").read() == open(second, "rb").read()

    def test_bad_config_exits_1(self, acc_path, tmp_path, capsys):
        assert main(["run", acc_path, "--step", "0.5",
                     "--sample", "0.1"]) == 1
        assert "sample" in capsys.readouterr().err

    def test_step_env_override(self, tmp_path, monkeypatch):
        path = write(tmp_path, "one.lince", "x := 0; x' = 1 for 1;")
        out = str(tmp_path / "trace.json")
        monkeypatch.setenv("HYSIM_ODE_STEP", "0.005")
        assert main(["run", path, "--out", out]) == 0
        assert json.loads(open(out).read())["config"]["odeStep"] == 0.005

    def test_batch_cap_exits_1(self, tmp_path, capsys):
        path = write(tmp_path, "big.lince", "a := [0..20000]; x := a;")
        assert main(["run", path]) == 1
        assert "cap" in capsys.readouterr().err

    def test_worker_count_does_not_change_output(self, acc_path, tmp_path):
        serial = str(tmp_path / "serial.json")
        threaded = str(tmp_path / "threaded.json")
        assert main(["run", acc_path, "--max-time", "10",
                     "--out", serial]) == 0
        assert main(["run", acc_path, "--max-time", "10", "--workers", "4",
                     "--out", threaded]) == 0
        assert open(serial, "rb").read() == open(threaded, "rb").read()


class TestHistCommand:
    def test_golden_bins(self, acc_path, tmp_path, golden_hist):
        out = str(tmp_path / "hist.json")
        assert main(["hist", acc_path, "--query", "ct <= 0 @ every 0.5",
                     "--out", out]) == 0
        data = json.loads(open(out).read())
        assert data["query"] == {"predicate": "ct <= 0", "every": 0.5,
                                 "horizon": 30.0}
        assert data["bins"] == golden_hist["bins"]

    def test_constant_true_counts_the_batch(self, acc_path, tmp_path):
        out = str(tmp_path / "hist.json")
        assert main(["hist", acc_path, "--query", "true @ every 1",
                     "--out", out]) == 0
        data = json.loads(open(out).read())
        assert all(b["count"] == b["total"] == 7 for b in data["bins"])

    def test_terminal_bars_without_out(self, acc_path, capsys):
        assert main(["hist", acc_path, "--query", "true @ every 5"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "true @ every 5"
        assert "7/7" in out

    def test_malformed_query_exits_1(self, acc_path, capsys):
        assert main(["hist", acc_path, "--query", "ct <= 0 every"]) == 1
        assert "error" in capsys.readouterr().err


class TestServeCommand:
    def test_health_on_os_assigned_port(self):
        proc = subprocess.Popen(
            [sys.executable, "-m", "hysim", "serve", "--port", "0"],
            stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, text=True)
        try:
            line = proc.stdout.readline()
            match = re.search(r"http://127\.0\.0\.1:(\d+)", line)
            assert match, line
            port = int(match.group(1))
            deadline = time.time() + 10
            body = None
            while time.time() < deadline:
                try:
                    with urllib.request.urlopen(
                            f"http://127.0.0.1:{port}/api/health",
                            timeout=1) as resp:
                        body = json.loads(resp.read())
                    break
                except OSError:
                    time.sleep(0.1)
            assert body == {"status": "ok", "version": "0.1.0"}
        finally:
            proc.terminate()
            proc.wait(timeout=10)

    def test_busy_port_exits_1(self):
        blocker = socket.socket()
        blocker.bind(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        try:
            proc = subprocess.run(
                [sys.executable, "-m", "hysim", "serve", "--port", str(port)],
                capture_output=True, text=True, timeout=30)
            assert proc.returncode == 1
            assert "error" in proc.stderr
        finally:
            blocker.close()
