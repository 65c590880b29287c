import json

import pytest

from bimoment.cli import main


def write_spec(tmp_path, name, A1, B1, A2, B2):
    def enc(coeffs):
        return [[float(c.real), float(c.imag)] for c in map(complex, coeffs)]

    path = tmp_path / name
    path.write_text(json.dumps(
        {"A1": enc(A1), "B1": enc(B1), "A2": enc(A2), "B2": enc(B2)}))
    return str(path)


@pytest.fixture
def quartic_spec(tmp_path):
    return write_spec(tmp_path, "quartic.json",
                      [0, 0, 0, 1], [1], [0, 0, 0, 1], [1])


@pytest.fixture
def gaussian_spec(tmp_path):
    return write_spec(tmp_path, "gauss.json", [0, 2], [1], [0, 2], [1])


def test_validate_quartic(quartic_spec, capsys):
    assert main(["validate", quartic_spec]) == 0
    out = capsys.readouterr().out
    assert "case BB1" in out
    assert "s1=3 s2=3 M=9" in out


def test_validate_degenerate_exit_3(tmp_path, capsys):
    spec = write_spec(tmp_path, "deg.json", [0, 1], [1], [0, 1], [1])
    assert main(["validate", spec]) == 3
    assert "DegenerateQuadratic" in capsys.readouterr().err


def test_validate_malformed_json_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["validate", str(path)]) == 2


def test_moments_gaussian(gaussian_spec, tmp_path, capsys):
    out = tmp_path / "moments.csv"
    rc = main(["moments", gaussian_spec, "--contour-x", "1", "--contour-y", "1",
               "--order", "4", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# recurrence_residual =")
    assert float(lines[0].split("=")[1]) < 1e-6
    header = lines[1]
    assert header == "n,m,re,im,err"
    first = lines[2].split(",")
    assert (int(first[0]), int(first[1])) == (0, 0)
    assert abs(float(first[2]) - 3.6275987284684357) < 1e-7


def test_moments_order_zero_single_entry(gaussian_spec, tmp_path):
    out = tmp_path / "m0.csv"
    assert main(["moments", gaussian_spec, "--order", "0", "--out", str(out)]) == 0
    rows = [l for l in out.read_text().splitlines() if not l.startswith(("#", "n,"))]
    assert len(rows) == 1


def test_moments_divergent_exit_4(tmp_path):
    spec = write_spec(tmp_path, "div.json", [0, 1.2], [1], [0, 0.5], [1])
    assert main(["moments", spec, "--order", "2", "--out", "-"]) == 4


def test_moments_deterministic(gaussian_spec, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    main(["moments", gaussian_spec, "--order", "3", "--out", str(a)])
    main(["moments", gaussian_spec, "--order", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_certify_gaussian(gaussian_spec, capsys):
    rc = main(["certify", gaussian_spec, "--order", "2", "--skip-asymptotics"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "rank 1/1" in out
    assert "PASS" in out


def test_certify_quartic(quartic_spec, capsys):
    rc = main(["certify", quartic_spec, "--order", "3", "--skip-asymptotics"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "rank 9/9" in out


def test_certify_duplicate_forces_failure(quartic_spec, capsys):
    rc = main(["certify", quartic_spec, "--order", "3", "--skip-asymptotics",
               "--repeat-functional", "0"])
    assert rc != 0
    assert "rank 9/10" in capsys.readouterr().out


def test_contours_dump_and_reload(quartic_spec, tmp_path):
    out = tmp_path / "contours.json"
    assert main(["contours", quartic_spec, "--marginal", "x",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data) == 3
    assert all(c["kind"] == "infinity_loop_3" for c in data)
    assert all(len(c["points"]) > 10 for c in data)


def test_contours_power_weight_counts(tmp_path):
    spec = write_spec(tmp_path, "pow.json", [-2.3, 0, 0, 0, 1], [0, 1], [0, 2], [1])
    out = tmp_path / "cp.json"
    assert main(["contours", spec, "--marginal", "x", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data) == 4
    kinds = sorted(c["kind"] for c in data)
    assert kinds.count("infinity_loop_3") == 3
    assert kinds.count("loop_1a") == 1


def test_favard_identity(tmp_path, capsys):
    N = 4
    rec = {
        "gamma": [[1.0, 0.0]] * N,
        "gamma_t": [[1.0, 0.0]] * N,
        "a": [[[0.0, 0.0]] * (n + 1) for n in range(N)],
        "b": [[[0.0, 0.0]] * (n + 1) for n in range(N)],
        "pi0": [1.0, 0.0],
        "sigma0": [1.0, 0.0],
    }
    path = tmp_path / "rec.json"
    path.write_text(json.dumps(rec))
    out = tmp_path / "table.csv"
    assert main(["favard", str(path), "--order", str(N), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert float(lines[0].split("=")[1]) < 1e-12
    rows = {}
    for line in lines[2:]:
        n, m, re, im = line.split(",")
        rows[(int(n), int(m))] = float(re)
    assert rows[(2, 2)] == 1.0
    assert rows[(2, 1)] == 0.0


def test_favard_zero_gamma_exit_3(tmp_path):
    rec = {
        "gamma": [[0.0, 0.0], [1.0, 0.0]],
        "gamma_t": [[1.0, 0.0]] * 2,
        "a": [[[0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
        "b": [[[0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
        "pi0": [1.0, 0.0],
        "sigma0": [1.0, 0.0],
    }
    path = tmp_path / "rec0.json"
    path.write_text(json.dumps(rec))
    assert main(["favard", str(path), "--order", "2", "--out", "-"]) == 3


def test_contours_rays_lie_in_declared_sectors(quartic_spec, tmp_path):
    """Replay the dumped polylines: every unbounded end heads into a decay
    sector of the weight."""
    import cmath

    from bimoment.polycore import CPoly
    from bimoment.weights import build_weight, sectors_at

    out = tmp_path / "c.json"
    main(["contours", quartic_spec, "--marginal", "x", "--out", str(out)])
    data = json.loads(out.read_text())
    w = build_weight(CPoly([0, 0, 0, 1]), CPoly.one())
    sectors = sectors_at(w, None)
    for c in data:
        pts = [complex(p[0], p[1]) for p in c["points"]]
        for end in (pts[0], pts[-1]):
            ang = cmath.phase(end)
            assert any(s.contains(ang) for s in sectors)
