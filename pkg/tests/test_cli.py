import json
import subprocess
import sys
from pathlib import Path

import pytest

from nonadditive.cli import main

GROUP_FILE = Path(__file__).resolve().parents[1] / "data" / "h_cosets.grp"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def built(tmp_path, capsys):
    path = tmp_path / "p.qexp"
    code, _, _ = run(capsys, "build", "--out", str(path))
    assert code == 0
    return path


def test_build_writes_rational_file(built):
    body = [l for l in built.read_text().splitlines() if not l.startswith("#")]
    assert len(body) == 22
    assert all("/" in l.split()[0] for l in body)


def test_build_json_report(capsys):
    code, out, _ = run(capsys, "build", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["K"] == 6 and d["distance"] == 2
    assert d["checks"]["basis_ok"] is True


def test_text_and_json_agree(capsys):
    _, js, _ = run(capsys, "build", "--format", "json")
    _, text, _ = run(capsys, "build", "--format", "text")
    d = json.loads(js)
    parsed = dict(line.split(": ", 1) for line in text.splitlines())
    assert json.loads(parsed["enumerator_B"]) == d["enumerator_B"]
    assert json.loads(parsed["checks.erasure"]) == d["checks"]["erasure"]


def test_build_unwritable(capsys, tmp_path):
    code, _, err = run(capsys, "build", "--out", str(tmp_path / "missing" / "p.qexp"))
    assert code == 2 and "cannot write" in err


def test_verify_pipeline(built, capsys):
    code, out, _ = run(capsys, "verify", str(built), "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["distance"] == 2 and d["enumerator_A"] == [36, 0, 0, 0, 60, 96]


def test_verify_perturbed(built, capsys, tmp_path):
    bad = tmp_path / "bad.qexp"
    bad.write_text(built.read_text().replace("3/16 IIIII", "4/16 IIIII"))
    code, out, _ = run(capsys, "verify", str(bad))
    assert code == 1 and "checks.projector: false" in out


@pytest.mark.parametrize("content", ["not a file\n", "1/16 XX\n1/16 XXX\n", ""])
def test_verify_malformed(capsys, tmp_path, content):
    f = tmp_path / "m.qexp"
    f.write_text(content)
    code, _, err = run(capsys, "verify", str(f))
    assert code == 2 and err.startswith("error:")


def test_verify_missing_file(capsys, tmp_path):
    assert run(capsys, "verify", str(tmp_path / "nope"))[0] == 2


def test_enumerator(built, capsys):
    code, out, _ = run(capsys, "enumerator", str(built), "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["enumerator_B"] == [6, 0, 120, 300, 450, 276] and d["trace"] == 6


@pytest.mark.parametrize("level, order, image", [("full", 3840, 120), ("640", 640, 20), ("H", 32, 1)])
def test_symmetry(built, capsys, level, order, image):
    code, out, _ = run(capsys, "symmetry", str(built), "--level", level, "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["group_order"] == order and d["permutation_image_order"] == image
    assert all(g["symmetry"] for g in d["generators"])


def test_symmetry_on_identity(capsys, tmp_path):
    f = tmp_path / "i.qexp"
    f.write_text("1 IIIII\n")
    code, out, _ = run(capsys, "symmetry", str(f), "--format", "json")
    assert code == 0 and json.loads(out)["group_order"] == 3840


def test_symmetry_failure(capsys, tmp_path):
    f = tmp_path / "z.qexp"
    f.write_text("1/2 IIIII\n1/2 ZIIII\n")
    assert run(capsys, "symmetry", str(f), "--level", "H")[0] == 1


def test_basis(capsys, tmp_path):
    code, out, _ = run(capsys, "basis", "--out", str(tmp_path / "b"), "--format", "json")
    d = json.loads(out)
    assert code == 0 and len(d["files"]) == 6 and d["gram_residual"] <= 1e-12
    for f in d["files"]:
        lines = Path(f).read_text().splitlines()
        assert len(lines) == 16
        assert all(abs(float(l.split()[0])) == 0.25 for l in lines)


def test_basis_unwritable(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(capsys, "basis", "--out", str(blocker / "sub"))[0] == 2


def test_coset_build(built, capsys):
    code, out, _ = run(capsys, "coset-build", str(GROUP_FILE), "--reference", str(built), "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["matches_reference"] is True
    assert d["coset_union_size"] == 192 and d["coset_union_min_distance"] == 2


def test_coset_build_mismatch(capsys, tmp_path):
    ref = tmp_path / "r.qexp"
    ref.write_text("1 IIIII\n")
    assert run(capsys, "coset-build", str(GROUP_FILE), "--reference", str(ref))[0] == 1


def test_discover_is_reproducible(capsys, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"d{k}.qexp"
        code, out, _ = run(capsys, "discover", "--out", str(path), "--format", "json")
        assert code == 0
        outs.append((out, path.read_bytes()))
    assert outs[0] == outs[1]
    d = json.loads(outs[0][0])
    assert d["seed"] is not None and d["converged"] and d["distance"] == 2
    code, out, _ = run(capsys, "verify", str(tmp_path / "d0.qexp"))
    assert code == 0


def test_discover_without_iterations(capsys):
    code, out, err = run(capsys, "discover", "--max-iters", "0", "--restarts", "2")
    assert code == 1 and "seed:" in out and "restart 0" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        main(["build", "--bogus"])
    assert info.value.code == 2


def test_console_entry_point(built):
    proc = subprocess.run(
        [sys.executable, "-m", "nonadditive.cli", "verify", str(built)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "distance: 2" in proc.stdout
