import json
import math
import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from minkplane import cli, svg
from minkplane.parallel import run_chunks, worker_count
from minkplane.proptest import CHECKS, SUITES, format_table, run_suite
from minkplane.scene import SceneError, from_dict, loads

HEX = {
    "norm": {"type": "polygon", "vertices": [[1, 0], [0.5, math.sqrt(3) / 2], [-0.5, math.sqrt(3) / 2]]},
    "bodies": {
        "t": {"type": "triangle", "vertices": [[0, 0], [3, 0.5], [1, 2]]},
        "c": {"type": "polygon", "vertices": [[-2, -2], [2, -2], [2, 2], [-2, 2]]},
    },
    "options": {"n": 4, "a": [0, 0], "b": [2, 0.3], "x": [3, 4], "trials": 2000, "pairs": 4, "dconvex_pairs": 50},
}
SQUARE = {
    "norm": {"type": "polygon", "vertices": [[1, -1], [1, 1]]},
    "bodies": {
        "c": {"type": "polygon", "vertices": [[-1, -1], [1, -1], [1, 1], [-1, 1]]},
        "t": {"type": "triangle", "vertices": [[-1, 0], [1, 0], [0, 1]]},
    },
    "options": {"n": 3, "arc": {"a": [1, 0], "b": [0, 1]}},
}


def write(tmp_path, doc, name="scene.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return p


def run(tmp_path, *args, scene=None):
    out = tmp_path / "report.json"
    argv = list(args) + ["--out", str(out)]
    if scene is not None:
        argv += ["--scene", str(write(tmp_path, scene))]
    code = cli.main(argv)
    return code, (json.loads(out.read_text()) if out.exists() else None)


class TestScene:
    def test_nan_rejected_with_position(self):
        with pytest.raises(SceneError, match=r"bad\.json:2:8: .*NaN"):
            loads('{"a": 1,\n "b": [NaN]}', "bad.json")

    def test_syntax_error_position(self):
        with pytest.raises(SceneError, match=r"x\.json:3:1:"):
            loads('{"a": 1,\n "b": 2\n', "x.json")

    def test_overflow_rejected(self):
        with pytest.raises(SceneError, match="1:7"):
            loads('{"a": 1e999}')

    def test_strings_are_not_numbers(self):
        assert loads('{"a": "NaN"}') == {"a": "NaN"}

    def test_unknown_body(self):
        with pytest.raises(SceneError):
            from_dict({"norm": {"type": "euclidean"}, "bodies": {"q": {"type": "circle"}}})

    def test_bad_norm(self):
        with pytest.raises(SceneError):
            from_dict({"norm": {"type": "polygon", "vertices": [[1, 0], [2, 0]]}})

    def test_roundtrip(self):
        sc = from_dict(HEX)
        assert sc.norm.gauge((1, 0)) == pytest.approx(1)
        assert sc.point_option("x").tolist() == [3, 4]


class TestCommands:
    def test_radon_check_hexagon(self, tmp_path):
        code, rep = run(tmp_path, "radon-check", scene=HEX)
        assert code == 0
        assert rep["outputs"]["is_radon"] is True
        assert rep["outputs"]["lambda"] == pytest.approx(math.sqrt(3) / 2, rel=1e-12)

    def test_radon_check_square_is_a_verdict(self, tmp_path):
        code, rep = run(tmp_path, "radon-check", scene=SQUARE)
        assert code == 0 and rep["outputs"]["is_radon"] is False

    def test_iso_report_square(self, tmp_path):
        code, rep = run(tmp_path, "iso-report", scene=SQUARE)
        assert code == 0 and rep["ok"]
        slacks = rep["outputs"]["inequality_slacks"]
        assert min(slacks.values()) >= -1e-12
        assert slacks["chakerian_star"] == pytest.approx(0, abs=1e-12)

    @pytest.mark.parametrize("command", [c for c in cli.COMMANDS if c not in ("proptest", "radon-construct")])
    def test_every_command_hexagon(self, tmp_path, command):
        code, rep = run(tmp_path, command, scene=HEX)
        assert code == 0, rep
        assert rep["command"] == command and rep["ok"]
        assert set(rep) >= {"inputs", "outputs", "checks", "seed", "seed_rule", "tolerances", "version"}

    def test_radon_construct(self, tmp_path):
        code, rep = run(tmp_path, "radon-construct", scene=SQUARE)
        assert code == 0 and len(rep["outputs"]["ball"]) == 6

    def test_zenodorus_square(self, tmp_path):
        code, rep = run(tmp_path, "zenodorus", scene=SQUARE)
        assert code == 0 and rep["outputs"]["area"] == pytest.approx(4, abs=1e-4)

    def test_deterministic_bytes(self, tmp_path):
        p = write(tmp_path, HEX)
        outs = []
        for i in range(2):
            o, s = tmp_path / f"r{i}.json", tmp_path / f"f{i}.svg"
            assert cli.main(["projections", "--scene", str(p), "--seed", "7", "--out", str(o), "--svg", str(s)]) == 0
            outs.append((o.read_bytes(), s.read_bytes()))
        assert outs[0] == outs[1]

    def test_threads_do_not_change_results(self, tmp_path, monkeypatch):
        p = write(tmp_path, HEX)
        outs = []
        for threads in ("1", "3"):
            monkeypatch.setenv("MINKPLANE_THREADS", threads)
            o = tmp_path / f"t{threads}.json"
            assert cli.main(["projections", "--scene", str(p), "--out", str(o)]) == 0
            outs.append(o.read_bytes())
        assert outs[0] == outs[1]


class TestExitCodes:
    def test_malformed_json(self, tmp_path, capsys):
        p = write(tmp_path, '{"norm": {"type": "euclidean"},\n  "options": {"x": NaN}}')
        assert cli.main(["antinorm", "--scene", str(p)]) == 2
        assert re.search(r":2:\d+:", capsys.readouterr().err)

    def test_missing_scene(self, capsys):
        assert cli.main(["antinorm"]) == 2

    def test_bad_tol(self, tmp_path):
        code, _ = run(tmp_path, "antinorm", "--tol", "bogus=1", scene=HEX)
        assert code == 2
        code, _ = run(tmp_path, "antinorm", "--tol", "radon=-1", scene=HEX)
        assert code == 2

    def test_tol_override_recorded(self, tmp_path):
        code, rep = run(tmp_path, "radon-check", "--tol", "radon=0.5,slack=1e-6", scene=SQUARE)
        assert code == 0 and rep["tolerances"]["radon"] == 0.5 and rep["outputs"]["is_radon"]

    def test_nonconvergence(self, tmp_path):
        # two midpoint steps are not enough for this skewed norm
        norm = {"type": "polygon", "vertices": [[1, 0], [0.3, 1], [-0.8, 0.6]]}
        scene = dict(HEX, norm=norm, options=dict(HEX["options"], n=5, max_iter=2))
        code, _ = run(tmp_path, "zenodorus", scene=scene)
        assert code == 3

    def test_bad_max_iter(self, tmp_path):
        code, _ = run(tmp_path, "zenodorus", scene=dict(HEX, options=dict(HEX["options"], max_iter=0)))
        assert code == 2

    def test_property_failure(self, tmp_path):
        # an impossible Lassak tolerance turns the check into a failure
        code, rep = run(tmp_path, "convexity", "--tol", "lassak=0", scene=HEX)
        assert code == 4 and not rep["ok"]

    def test_geometry_error(self, tmp_path):
        bad = dict(HEX, bodies={"t": {"type": "triangle", "vertices": [[0, 0], [1, 1], [2, 2]]}})
        code, _ = run(tmp_path, "triangle", scene=bad)
        assert code == 2


class TestSvg:
    def test_empty_figure(self):
        text = svg.Figure("nothing here").render()
        root = ET.fromstring(text.split("\n", 1)[1])
        assert root.get("version") == "1.1"
        assert [c.tag.split("}")[1] for c in root] == ["text"]

    def test_y_up_and_margin(self):
        text = svg.Figure().polygon([(0, 0), (10, 0), (10, 20)]).render()
        vb = [float(v) for v in re.search(r'viewBox="([^"]+)"', text).group(1).split()]
        assert vb == [-0.5, -21.0, 11.0, 22.0]
        assert 'points="0,0 10,0 10,-20"' in text

    def test_square_ball_figure(self, tmp_path):
        s = tmp_path / "f.svg"
        assert cli.main(["isoperimetrix", "--scene", str(write(tmp_path, SQUARE)), "--out", str(tmp_path / "r.json"), "--svg", str(s)]) == 0
        shapes = [
            {tuple(float(c) for c in pt.split(",")) for pt in m.split()}
            for m in re.findall(r'<polygon points="([^"]+)"', s.read_text())
        ]
        # y is flipped in the file, which leaves both symmetric bodies unchanged
        assert {(1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)} in shapes
        assert {(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)} in shapes

    def test_quadrant_figure(self, tmp_path):
        s = tmp_path / "q.svg"
        cli.main(["radon-construct", "--scene", str(write(tmp_path, SQUARE)), "--out", str(tmp_path / "r.json"), "--svg", str(s)])
        text = s.read_text()
        assert text.count("<polyline") == 6
        assert len(set(re.findall(r'<polyline[^>]*stroke="([^"]+)"', text))) == 4


class TestProptest:
    def test_suites_cover_modules(self):
        assert set(SUITES) >= {"geometry", "norms", "radon", "triangle", "isoperimetry", "projections", "convexity"}
        assert len(CHECKS) >= 20

    def test_geometry_suite_deterministic(self):
        a, b = run_suite("geometry", 42), run_suite("geometry", 42)
        assert all(r.ok for r in a)
        assert [r.value for r in a] == [r.value for r in b]
        assert "PASS" in format_table(a)

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("nope", 0)

    def test_cli_exit(self, tmp_path, capsys):
        assert cli.main(["proptest", "--suite", "norms", "--seed", "42"]) == 0
        assert "PASS" in capsys.readouterr().err


class TestParallel:
    def test_worker_env(self, monkeypatch):
        monkeypatch.setenv("MINKPLANE_THREADS", "3")
        assert worker_count() == 3
        monkeypatch.setenv("MINKPLANE_THREADS", "junk")
        assert worker_count() >= 1

    def test_chunks_independent_of_workers(self, monkeypatch):
        fn = lambda a, b, rng: (a, b, float(rng.uniform()))
        monkeypatch.setenv("MINKPLANE_THREADS", "1")
        one = run_chunks(fn, 1000, 5)
        monkeypatch.setenv("MINKPLANE_THREADS", "4")
        assert run_chunks(fn, 1000, 5) == one
        assert [c[:2] for c in one] == [(0, 256), (256, 512), (512, 768), (768, 1000)]


def test_version(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["--version"])
    assert e.value.code == 0
    assert "minkplane" in capsys.readouterr().out
