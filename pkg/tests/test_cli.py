import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from fuchsq import serialize
from fuchsq.cli import main
from fuchsq.errors import InputError, SchemaError
from fuchsq.fuchsian import psl_kernel
from fuchsq.render import RenderSpec, fmt, render_svg


def _count(svg: str, cls: str) -> int:
    return len(re.findall(rf'class="{cls}"', svg))


def test_blueprint_round_trip_is_exact(golden):
    data = serialize.blueprint_to_json(golden)
    again = serialize.blueprint_from_json(json.loads(serialize.dumps(data)))
    assert again == golden
    assert serialize.blueprint_to_json(again) == data


def test_frozen_golden_fixture_matches_fresh_construction(golden, golden_path):
    assert serialize.dumps(serialize.blueprint_to_json(golden)) == golden_path.read_text()


@pytest.mark.parametrize("mutate,where", [
    (lambda d: d.pop("schema"), "<root>"),
    (lambda d: d.update(schema="fuchsian-blueprint/2"), "schema"),
    (lambda d: d["input"].update(v0=-2.0), "input/v0"),
    (lambda d: d["generators"][0].update(a="1.5"), "generators/0/a"),
])
def test_schema_mismatch_is_reported(golden, mutate, where):
    data = serialize.blueprint_to_json(golden)
    mutate(data)
    with pytest.raises(SchemaError, match=where):
        serialize.blueprint_from_json(data)


def test_kernel_json_validates(golden):
    data = serialize.kernel_to_json(psl_kernel(golden))
    serialize.check(data, serialize.KERNEL_SCHEMA, "kernel")
    assert data["index"] == 4


def test_fmt_rounds_exactly():
    from fractions import Fraction
    assert fmt(Fraction(1, 3)) == "0.333333"
    assert fmt(Fraction(-2, 3)) == "-0.666667"
    assert fmt(Fraction(-1, 10**7)) == "0.000000"
    assert fmt(5) == "5.000000"


def test_render_counts_and_determinism(golden):
    svg = render_svg(golden)
    assert _count(svg, "edge") == golden.n + 1
    assert _count(svg, "axis") == golden.n - 1
    assert svg.count(' L ') == 2  # the two sides meeting infinity
    assert svg == render_svg(golden)
    assert "stroke-dasharray" in svg


def test_render_spec_validation(golden):
    from fractions import Fraction
    with pytest.raises(InputError, match="xmin < xmax"):
        RenderSpec(Fraction(1), Fraction(0))
    assert 'width="300"' in render_svg(golden, RenderSpec.fit(golden, width=300))


def test_cli_construct_verify_render(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert main(["construct", "--points", "0,2", "--prime", "3", "--v0=-2", "--x1=-1",
                 "--t-init", "1", "--seed-out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "generators: 4" in text and "(0; 2,2,2,2; 1; 0)" in text
    assert main(["verify", str(out)]) == 0
    svg1, svg2 = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["render", str(out), "-o", str(svg1)]) == 0
    assert main(["render", str(out), "-o", str(svg2)]) == 0
    assert svg1.read_bytes() == svg2.read_bytes()


def test_cli_figure_example(tmp_path, capsys):
    out = tmp_path / "f.json"
    assert main(["construct", "--points", "0,1,2,3", "--prime", "3", "-o", str(out)]) == 0
    assert "generators: 6" in capsys.readouterr().out
    svg = tmp_path / "f.svg"
    main(["render", str(out), "-o", str(svg)])
    text = svg.read_text()
    assert _count(text, "edge") == 6 and _count(text, "axis") == 4


def test_cli_tree_check(golden_path, capsys):
    assert main(["tree-check", str(golden_path), "--prime", "3"]) == 0
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["verdict"] == "no" and verdict["violating_pair"] == [1, 2]
    assert main(["tree-check", str(golden_path), "--prime", "31"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "stabilizes"


def test_cli_exit_codes(tmp_path, golden_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["verify", str(bad)]) == 2
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    assert main(["construct", "--points", "0,2", "--prime", "5", "-o", str(tmp_path / "x.json")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["construct"])
    assert exc.value.code == 2

    tampered = json.loads(golden_path.read_text())
    tampered["generators"][2]["matrix"][0][1] = "2"
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(tampered))
    assert main(["verify", str(path)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_cli_family_layout(tmp_path, capsys):
    assert main(["family", "--points", "0,1", "--count", "3", "--out", str(tmp_path), "--id", "demo"]) == 0
    root = tmp_path / "demo"
    names = sorted(p.name for p in root.iterdir())
    assert names == ["cert_1_2.json", "cert_1_3.json", "cert_2_3.json", "group_1.json",
                     "group_2.json", "group_3.json", "manifest.json"]
    members, certs = serialize.read_family(root)
    assert [m.prime for m in members] == [3, 103, 124567]
    for (i, j), cert in certs.items():
        assert cert.validate(members[i - 1].blueprint, members[j - 1].blueprint)


def test_console_script_runs(golden_path):
    out = subprocess.run([sys.executable, "-m", "fuchsq.cli", "verify", str(golden_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
