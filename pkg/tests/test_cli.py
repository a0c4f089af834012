import json
import os
import subprocess
import sys

from centralset.cli import replay_artifact, run

NAT = json.dumps({"kind": "nat"})
FREE = json.dumps({"kind": "free", "alphabet": 2})
EVENS = json.dumps({"kind": "ev-periodic", "pre": "", "period": "01"})
MULT5 = json.dumps({"kind": "ev-periodic", "pre": "", "period": "00001"})
AB = json.dumps({"kind": "factor", "word": "ab"})


def seqs(*fns, T=40):
    return json.dumps({"T": T, "sequences": [{"values": [f(t) for t in range(1, T + 1)]} for f in fns]})


CONST_AB = json.dumps({"T": 30, "sequences": [{"const": "a"}, {"const": "b"}]})


def emit(tmp_path, name, *argv):
    out = tmp_path / name
    code = run([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def flip_bit(value, bit):
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value ^ (1 << bit)
    return value[:-1] + chr(ord(value[-1]) ^ (1 << bit))


def scalar_slots(obj, path=()):
    """(path, value) for every int/str leaf."""
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from scalar_slots(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from scalar_slots(v, path + (i,))
    elif isinstance(obj, (int, str)):
        yield path, obj


def set_at(obj, path, value):
    for p in path[:-1]:
        obj = obj[p]
    obj[path[-1]] = value


def test_classify_evens_exit_zero(tmp_path):
    code, art = emit(tmp_path, "c.json", "classify", "--semigroup", NAT, "--set", EVENS)
    assert code == 0 and art["schema"] == 1 and art["verification"]["ok"]
    assert art["result"]["pws"]["translates"] == [1, 2]


def test_classify_inconclusive_is_exit_one(tmp_path):
    small = json.dumps({"kind": "window", "bits": "0110", "window": 4})
    code, art = emit(tmp_path, "c.json", "classify", "--semigroup", NAT, "--set", small)
    assert code == 1 and art["status"] == "inconclusive"


def test_hj_certify(tmp_path):
    code, art = emit(tmp_path, "h.json", "hj", "certify", "--r", "2", "--t", "2", "--nmax", "3")
    assert code == 0
    assert art["result"]["HJ"] == 2 and art["result"]["counterexamples"] == {"1": "12"}


def test_hj_exit_codes_distinct(tmp_path):
    code, _ = emit(tmp_path, "h.json", "hj", "certify", "--r", "2", "--t", "3", "--nmax", "2")
    assert code == 1
    assert run(["hj", "certify", "--r", "2", "--t", "4", "--nmax", "3"]) == 3
    assert run(["hj", "certify", "--r", "0", "--t", "2", "--nmax", "1"]) == 2


def test_hj_line(tmp_path):
    col = json.dumps({"r": 2, "t": 2, "N": 2, "colors": "1221"})
    code, art = emit(tmp_path, "l.json", "hj", "line", "--coloring", col)
    assert code == 0 and art["result"]["line"]["vw"] == "**"
    col = json.dumps({"r": 2, "t": 2, "N": 1, "colors": "12"})
    code, art = emit(tmp_path, "l.json", "hj", "line", "--coloring", col)
    assert code == 1 and art["result"]["line"] is None


def test_jset_empty_sequences_exit_two():
    assert run(["jset", "witness", "--semigroup", NAT, "--set", MULT5, "--sequences", '{"sequences": []}']) == 2


def test_missing_file_exit_two(tmp_path):
    assert run(["classify", "--semigroup", str(tmp_path / "nope.json"), "--set", EVENS]) == 2


def test_truncation_exhausted_exit_one(tmp_path):
    code, art = emit(tmp_path, "j.json", "jset", "witness", "--semigroup", NAT, "--set", MULT5,
                     "--sequences", seqs(lambda t: t, lambda t: 2 * t, T=3), "--min-index", "2")
    assert code == 1 and art["status"] == "not-found"


def test_jset_auto_selects_backend(tmp_path):
    code, art = emit(tmp_path, "j.json", "jset", "witness", "--semigroup", NAT, "--set", MULT5,
                     "--sequences", seqs(lambda t: t, lambda t: 2 * t))
    assert code == 0 and art["artifact"] == "jwitness" and art["result"]["a"] == 5
    code, art = emit(tmp_path, "n.json", "jset", "witness", "--semigroup", FREE, "--set", AB, "--sequences", CONST_AB)
    assert code == 0 and art["artifact"] == "ncwitness"


def artifacts(tmp_path):
    runs = {
        "classify": ["classify", "--semigroup", FREE, "--set", AB],
        "hj": ["hj", "certify", "--r", "2", "--t", "2", "--nmax", "2"],
        "line": ["hj", "line", "--coloring", json.dumps({"r": 2, "t": 3, "N": 2, "colors": "121212121"})],
        "jset": ["jset", "witness", "--semigroup", NAT, "--set", MULT5, "--sequences", seqs(lambda t: t, lambda t: 2 * t)],
        "ncjset": ["jset", "witness", "--semigroup", FREE, "--set", AB, "--sequences", CONST_AB],
        "table": ["central", "build", "--semigroup", NAT, "--chain", MULT5,
                  "--sequences", seqs(lambda t: t, lambda t: 2 * t)],
        "nctable": ["central", "build", "--semigroup", FREE, "--chain", AB, "--sequences", CONST_AB],
        "furstenberg": ["central", "furstenberg", "--semigroup", NAT, "--chain", EVENS,
                        "--sequences", seqs(lambda t: 2 * t, lambda t: 4 * t), "--nmax", "3"],
        "phi": ["central", "phi", "--semigroup", NAT, "--chain", EVENS,
                "--sequences", seqs(*[lambda t, l=l: 2 * l * t for l in (1, 2, 3)]), "--nmax", "3"],
    }
    out = {}
    for name, argv in runs.items():
        code, art = emit(tmp_path, f"{name}.json", *argv)
        assert code == 0, name
        out[name] = (tmp_path / f"{name}.json", art)
    return out


def test_verify_accepts_every_artifact(tmp_path):
    for name, (path, art) in artifacts(tmp_path).items():
        assert run(["verify", str(path)]) == 0, name
        assert replay_artifact(art)["ok"], name


# fields where every single-bit change yields an invalid witness: residues
# mod 5 move under any power of two, and a flipped letter leaves {a, b}
WITNESS_FIELDS = {"jset": ("a", "H"), "ncjset": ("a",), "table": ("entries",)}


def test_verify_rejects_flipped_witness_bits(tmp_path):
    arts = artifacts(tmp_path)
    for name, fields in WITNESS_FIELDS.items():
        art = arts[name][1]
        slots = [(p, v) for f in fields for p, v in scalar_slots(art["result"][f], (f,))
                 if name != "table" or p[2] in ("alpha", "H")]
        assert slots
        for path, value in slots:
            for bit in range(7):
                bad = json.loads(json.dumps(art))
                set_at(bad["result"], path, flip_bit(value, bit))
                target = tmp_path / "bad.json"
                target.write_text(json.dumps(bad))
                assert run(["verify", str(target)]) != 0, (name, path, bit)


def test_verify_flags_mutated_table(tmp_path):
    code, art = emit(tmp_path, "t.json", "central", "build", "--semigroup", NAT, "--chain", EVENS,
                     "--sequences", seqs(lambda t: t, lambda t: t * t, T=60))
    assert code == 0 and art["verification"]["checks"] == 8
    for i in range(len(art["result"]["entries"])):
        bad = json.loads(json.dumps(art))
        bad["result"]["entries"][i]["alpha"] += 1
        (tmp_path / "bad.json").write_text(json.dumps(bad))
        assert run(["verify", str(tmp_path / "bad.json")]) == 1


def test_verify_rejects_garbage(tmp_path):
    (tmp_path / "x.json").write_text('{"schema": 2}')
    assert run(["verify", str(tmp_path / "x.json")]) == 2


def test_byte_identical_modulo_timestamp(tmp_path):
    argv = ["central", "furstenberg", "--semigroup", NAT, "--chain", EVENS,
            "--sequences", seqs(lambda t: 2 * t, lambda t: 4 * t), "--nmax", "2"]
    _, a = emit(tmp_path, "a.json", *argv)
    _, b = emit(tmp_path, "b.json", *argv)
    a.pop("created"), b.pop("created")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_atomic_output_leaves_no_temp_files(tmp_path):
    emit(tmp_path, "h.json", "hj", "certify", "--r", "2", "--t", "2", "--nmax", "2")
    assert sorted(os.listdir(tmp_path)) == ["h.json"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "centralset", "hj", "certify", "--r", "1", "--t", "2", "--nmax", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["HJ"] == 1


def test_bad_arguments_exit_two():
    assert run(["hj", "certify", "--r", "x"]) == 2
    assert run(["classify", "--semigroup", NAT, "--set", EVENS, "--window", "0"]) == 2
