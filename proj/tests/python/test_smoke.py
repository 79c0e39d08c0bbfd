import os
import subprocess

import pytest

ps2mac = pytest.importorskip("ps2mac")


def test_access_table_matches_published_quanta():
    rows = ps2mac.access_table()
    assert [r["quanta"] for r in rows] == ps2mac.golden_access_table()
    assert rows[0]["ratio"] == (240.0, 20.0, 10.0)


def test_quanta_with_custom_weights():
    assert ps2mac.quanta(80, 10, 10, weights=(4, 2, 1)) == [32, 2, 1]
    assert ps2mac.normalize_percentages(30, 50, 20) == (33.0, 33.0, 20.0)


def test_mac_constants():
    assert ps2mac.aifsn() == [2, 3, 6]
    assert ps2mac.ifs() == [50, 70, 130]
    pf = ps2mac.priority_factors()
    assert pf == pytest.approx([0.5, 2 / 3, 5 / 6], abs=1e-12)
    assert ps2mac.prioritized_backoff(0.5, 0, 32) == 160


def test_short_run_is_deterministic_and_balanced():
    a = ps2mac.run("II", "ps2mac", seed=3, duration=3.0)
    b = ps2mac.run("II", "ps2mac", seed=3, duration=3.0)
    assert a == b
    assert a["balanced"]
    assert a["HP"]["generated"] > 0
    assert 0.0 <= a["LP"]["pdr"] <= 1.0


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        ps2mac.run("VI")
    with pytest.raises(ValueError):
        ps2mac.run("I", duration=0.0)
    with pytest.raises(ValueError):
        ps2mac.quanta(50, 30, 20, weights=(1, 2, 3))


def test_csv_text():
    runs, agg = ps2mac.run_csv("I", "atst", seeds=2, duration=2.0)
    lines = runs.strip().split("\n")
    assert lines[0].startswith("scenario,scheme,seed,class,throughput_bps")
    assert len(lines) == 1 + 2 * 4
    assert agg.split("\n")[1].startswith("I,atst,HP,2,")


@pytest.mark.skipif(not os.environ.get("PS2MAC_CLI"), reason="command line tool not built")
def test_cli_table1_exit_codes():
    cli = os.environ["PS2MAC_CLI"]
    out = subprocess.run([cli, "table1"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "24:2:1" in out.stdout
    bad = subprocess.run([cli, "compare", "--scheme", "legacy-dcf"], capture_output=True, text=True)
    assert bad.returncode == 1
