import json

from gmspace import certificates
from gmspace.cli import main
from gmspace.registry import SigmaRegistry


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_mt_norm_text(capsys):
    code, out = run(capsys, "--format", "text", "mt-norm", "1:1,2:1,3:1,4:1")
    assert code == 0 and out.splitlines()[0] == "norm: 2"


def test_global_flags_after_subcommand(capsys):
    a = run(capsys, "--format", "json", "norm", "1:1,2:1")
    b = run(capsys, "norm", "1:1,2:1", "--format", "json")
    assert a == b and a[0] == 0
    d = json.loads(a[1])
    assert d["lower"] == "1" and d["upper"] == "5/4"


def test_bad_vector_is_usage_error(capsys):
    assert main(["norm", "bogus"]) == 2


def test_conforming_capacity_exit(capsys):
    assert main(["--mode", "conforming", "special", "1", "--length", "4"]) == 3
    assert capsys.readouterr().err.startswith("capacity:")


def test_certify_valid_and_tampered(capsys, tmp_path):
    code, out = run(capsys, "--format", "json", "norm", "1:1,2:1,3:1,4:1,5:1,6:1,7:1,8:1")
    cert = certificates.from_obj(json.loads(out)["certificate"])
    good = tmp_path / "good.json"
    good.write_text(certificates.dumps(cert))
    code, out = run(capsys, "certify", "1:1,2:1,3:1,4:1,5:1,6:1,7:1,8:1", str(good))
    assert code == 0 and "valid" in out and "invalid" not in out
    obj = json.loads(certificates.dumps(cert))
    obj["children"][1] = obj["children"][0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, out = run(capsys, "certify", "1:1,2:1,3:1,4:1,5:1,6:1,7:1,8:1", str(bad))
    assert code == 1 and out.startswith("invalid")


def test_registry_round_trip(capsys, tmp_path):
    reg = tmp_path / "sigma.tsv"
    assert main(["--registry", str(reg), "special", "1", "--length", "4"]) == 0
    first = reg.read_bytes()
    loaded = SigmaRegistry.load(reg)
    assert len(loaded) == 1
    capsys.readouterr()
    code, out = run(capsys, "--registry", str(reg), "registry", "inspect")
    assert code == 0 and json.loads(out)["entries"] == 1
    # reloading and saving does not change the file
    assert main(["--registry", str(reg), "registry", "export"]) == 0
    assert reg.read_bytes() == first


def test_json_output_deterministic(capsys):
    outs = [run(capsys, "--format", "json", "--seed", "5", "isometry", "--random", "3") for _ in range(2)]
    assert outs[0] == outs[1] and outs[0][0] == 0


def test_gen_k_and_witness(capsys):
    code, out = run(capsys, "--gen-cap", "1", "--supp-cap", "4", "--weight-cap", "4", "gen-k")
    assert code == 0
    code, out = run(capsys, "--format", "json", "witness", "1", "--kind", "gap")
    assert code == 0 and json.loads(out)["lower"] == "1"


def test_report_files(capsys, tmp_path):
    assert main(["report", "--out", str(tmp_path)]) == 0
    pngs = sorted(p.stem for p in tmp_path.glob("*.png"))
    csvs = sorted(p.stem for p in tmp_path.glob("*.csv"))
    assert pngs and set(pngs) <= set(csvs)
    assert (tmp_path / "witness.json").exists()
