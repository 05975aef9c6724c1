import json
import subprocess
import sys

import numpy as np
import pytest

from fragrecon import bench
from fragrecon.cli import main
from fragrecon.shotgun import parse_dump, random_instance

from .conftest import FIVE, GATTACA


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def gattaca_file(tmp_path):
    p = tmp_path / "frags.txt"
    p.write_bytes(b"\n".join(GATTACA) + b"\n")
    return p


def test_shotgun_writes_fragments_and_meta(tmp_path, capsys):
    src = tmp_path / "s.fa"
    src.write_text(">demo\nGATTACAGGT\n")
    out = tmp_path / "f.txt"
    code, _, _ = run(capsys, "shotgun", src, "-m", 2, "-n", 2, "--seed", 4, "-o", out)
    assert code == 0
    lines = out.read_bytes().splitlines()
    assert len(lines) == 6
    length, a, b, frags = parse_dump((tmp_path / "f.txt.meta").read_bytes())
    assert length == 10 and len(a) == 2 and len(b) == 2 and frags == lines


def test_shotgun_errors(tmp_path, capsys):
    empty = tmp_path / "e.txt"
    empty.write_bytes(b"")
    assert run(capsys, "shotgun", empty, "-m", 1, "-n", 1)[0] == 1
    src = tmp_path / "s.txt"
    src.write_text("GATTACAGGT")
    code, _, err = run(capsys, "shotgun", src, "-m", 5, "-n", 5)
    assert code == 1 and "cuts" in err


@pytest.mark.parametrize("mode", ["--naive", "--indexed"])
def test_reconstruct_gattaca(gattaca_file, capsys, mode):
    code, out, _ = run(capsys, "reconstruct", gattaca_file, mode, "--emit-trace")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "GATTACAGGT"
    assert lines[1].startswith("# nodes_expanded=")
    assert lines[2:] == ["INIT 3 0", "EXT 4", "EXT 1", "EXT 5", "FIN 2"]


def test_reconstruct_json(gattaca_file, capsys):
    code, out, _ = run(capsys, "reconstruct", gattaca_file, "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["sequence"] == "GATTACAGGT" and doc["backtracks"] == 0


def test_reconstruct_exit_codes(tmp_path, capsys):
    p = tmp_path / "u.txt"
    p.write_text("XY\nZW\n")
    assert run(capsys, "reconstruct", p)[0] == 2
    q = tmp_path / "big.txt"
    q.write_bytes(b"\n".join(random_instance(400, 20, 20, seed=3).fragments.datas) + b"\n")
    assert run(capsys, "reconstruct", q, "--max-nodes", 2)[0] == 3


def test_naive_and_indexed_agree_on_random_files(tmp_path, capsys):
    for seed in range(10):
        p = tmp_path / f"r{seed}.txt"
        p.write_bytes(b"\n".join(random_instance(300, 3, 4, seed=seed).fragments.datas) + b"\n")
        a = run(capsys, "reconstruct", p, "--naive", "--emit-trace")
        b = run(capsys, "reconstruct", p, "--indexed", "--emit-trace")
        assert a[0] == 0 and a == b


def test_overlap_commands(tmp_path, capsys):
    p = tmp_path / "five.txt"
    p.write_bytes(b"\n".join(FIVE) + b"\n")
    code, out, _ = run(capsys, "overlap", "greedy", p)
    assert code == 0 and out.strip() == "abthatbabhhatbpaabtabhaabtpb"
    code, out, _ = run(capsys, "overlap", "exact", p)
    assert len(out.strip()) == 28
    code, out, _ = run(capsys, "overlap", "dump", p)
    assert out.splitlines()[3].split(",")[2] == "7"


def test_build_sa_formats(tmp_path, capsys):
    p = tmp_path / "b.txt"
    p.write_text("banana")
    code, out, _ = run(capsys, "build-sa", p, "--format", "txt")
    assert code == 0 and out.split() == ["5", "3", "1", "0", "4", "2"]
    o = tmp_path / "b.sa"
    assert run(capsys, "build-sa", p, "-o", o, "--workers", 2)[0] == 0
    assert np.frombuffer(o.read_bytes(), dtype="<u4").tolist() == [5, 3, 1, 0, 4, 2]
    assert run(capsys, "build-sa", p, "--format", "csv")[0] == 1


def test_build_sa_over_fragments(gattaca_file, tmp_path, capsys):
    o1, o2 = tmp_path / "a.sa", tmp_path / "b.sa"
    run(capsys, "build-sa", gattaca_file, "--fragments", "-o", o1)
    run(capsys, "build-sa", gattaca_file, "--fragments", "--naive", "-o", o2)
    assert o1.read_bytes() == o2.read_bytes() and len(o1.read_bytes()) == 26 * 4


def test_verify(gattaca_file, tmp_path, capsys):
    c = tmp_path / "c.txt"
    c.write_text("GATTACAGGT\n")
    assert run(capsys, "verify", c, gattaca_file)[1].strip() == "valid"
    c.write_text("GATTACAGGA\n")
    code, out, _ = run(capsys, "verify", c, gattaca_file)
    assert code == 1 and out.strip() == "invalid"


def test_config_file(tmp_path, gattaca_file, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"workers": 2, "chunk_size": 64}))
    assert run(capsys, "reconstruct", gattaca_file, "--config", conf)[0] == 0
    conf.write_text(json.dumps({"threads": 2}))
    assert run(capsys, "reconstruct", gattaca_file, "--config", conf)[0] == 1


def test_bench_duplicate_workers(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", 1024, "--workers", 1, 1, "--ops", "radix_sort", "chunked_radix_sort")
    assert code == 0
    rows = bench.read_csv(out)
    assert len(rows) == 2 * 2 * 4
    assert len({r["checksum"] for r in rows}) == 1


def test_bench_strict_sizes(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["bench", "--sizes", "1000", "--strict-sizes"])
    assert ei.value.code == 2


def test_bench_checksums_invariant():
    recs = bench.run_bench(sizes=[1024, 2048], workers=[1, 3], reps=1, chunk_size=128)
    recs += bench.run_bench(sizes=[1024, 2048], workers=[2], reps=1, chunk_size=1 << 15, digit_bits=8)
    by_key = {}
    for r in recs:
        by_key.setdefault((r.op_name, r.n), set()).add(r.checksum)
    assert all(len(v) == 1 for v in by_key.values())
    # both sorts give the same permutation
    assert by_key["radix_sort", 1024] == by_key["chunked_radix_sort", 1024]
    rows = bench.read_csv(bench.to_csv(recs))
    assert {r["rep"] for r in rows} == {0, "median"}


def test_bench_csv_validation():
    with pytest.raises(ValueError):
        bench.read_csv("op,n\n")
    with pytest.raises(ValueError):
        bench.read_csv(",".join(bench.COLUMNS) + "\nsort,1,1,1,0,5,5\n")


def test_module_entry_point(gattaca_file):
    proc = subprocess.run(
        [sys.executable, "-m", "fragrecon", "reconstruct", str(gattaca_file)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "GATTACAGGT"
