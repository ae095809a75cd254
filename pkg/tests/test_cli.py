import json
import threading
import time

import httpx
import pytest
import uvicorn

from gaugelab.cli import main


def test_list(capsys):
    assert main(["list", "-v"]) == 0
    out = capsys.readouterr().out
    assert "yang_failure" in out and "temporal_gauge_spectrum" in out


def test_run_and_report(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small box\nn = 512\n")
    out = tmp_path / "sc"
    assert main(["run", "soft_coulomb_bound_states", "--config", str(cfg), "--out", str(out), "--seed", "5"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["params"]["n"] == 512 and report["seed"] == 5
    assert main(["report", str(tmp_path)]) == 0
    assert "ALL PASS" in capsys.readouterr().out


def test_exit_code_on_failing_claim(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 256\nkappa = 0.0\n")
    assert main(["run", "soft_coulomb_bound_states", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1
    assert main(["report", str(tmp_path / "o")]) == 1


def test_report_rejects_tampered_file(tmp_path):
    main(["run", "soft_coulomb_bound_states", "--out", str(tmp_path), "--config", _cfg(tmp_path, "n = 256")])
    data = json.loads((tmp_path / "report.json").read_text())
    data["claims"][0]["passed"] = False
    (tmp_path / "report.json").write_text(json.dumps(data))
    assert main(["report", str(tmp_path)]) == 1


def test_bad_config_exit_code(tmp_path):
    assert main(["run", "soft_coulomb_bound_states", "--config", _cfg(tmp_path, "bogus = 1"),
                 "--out", str(tmp_path / "o")]) == 2


def test_empty_report_dir(tmp_path):
    assert main(["report", str(tmp_path)]) == 2


def _cfg(tmp_path, text):
    path = tmp_path / "c.cfg"
    path.write_text(text + "\n")
    return str(path)


@pytest.fixture(scope="module")
def server():
    config = uvicorn.Config("gaugelab.api:app", host="127.0.0.1", port=8765, log_level="warning")
    srv = uvicorn.Server(config)
    thread = threading.Thread(target=srv.run, daemon=True)
    thread.start()
    for _ in range(100):
        try:
            httpx.get("http://127.0.0.1:8765/health")
            break
        except httpx.TransportError:
            time.sleep(0.05)
    yield "http://127.0.0.1:8765"
    srv.should_exit = True
    thread.join(timeout=5)


def test_thin_client_matches_local(tmp_path, server):
    cfg = _cfg(tmp_path, "n = 512")
    assert main(["run", "soft_coulomb_bound_states", "--config", cfg, "--out", str(tmp_path / "r"),
                 "--server", server]) == 0
    assert main(["run", "soft_coulomb_bound_states", "--config", cfg, "--out", str(tmp_path / "l")]) == 0
    assert (tmp_path / "r" / "report.json").read_text() == (tmp_path / "l" / "report.json").read_text()
    assert (tmp_path / "r" / "spectrum_soft_coulomb.csv").read_text() == \
        (tmp_path / "l" / "spectrum_soft_coulomb.csv").read_text()
    assert main(["list", "--server", server]) == 0
