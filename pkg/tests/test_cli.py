import json
import pathlib

from mcdeform.cli import main

SAMPLES = pathlib.Path(__file__).resolve().parent.parent / "samples"


def s(name):
    return str(SAMPLES / name)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_validate(capsys):
    code, out = run(capsys, "validate", s("lobs.dgla"))
    assert code == 0 and "Lobs" in out
    for name in ("t3_to_t2.ext", "bigraded_one.bigraded", "two_term.complex"):
        assert run(capsys, "validate", s(name))[0] == 0


def test_cohomology_json(capsys):
    code, out = run(capsys, "--json", "cohomology", "zoo:Lobs", "--range", "0..3")
    assert code == 0
    data = json.loads(out)
    assert data["exit_code"] == 0
    assert "1" in json.dumps(data)


def test_mc_check_exit_codes(capsys):
    assert run(capsys, "mc-check", s("lobs.dgla"), "t^2", s("lobs_first_order.elt"))[0] == 0
    code, out = run(capsys, "mc-check", s("lobs.dgla"), "t^3", s("lobs_first_order.elt"))
    assert code == 2 and "v.t^2" in out


def test_mc_lift_dies_with_obstruction(capsys):
    code, out = run(capsys, "mc-lift", s("lobs.dgla"), "--tower", "t^4")
    assert code == 3 and "obstruction" in out


def test_mc_lift_unobstructed(capsys):
    code, _ = run(capsys, "mc-lift", "zoo:Labh1", "--tower", "t^4")
    assert code == 0


def test_obstruction_routes_agree(capsys):
    code, out = run(capsys, "obstruction", s("lobs.dgla"), s("t3_to_t2.ext"),
                    s("lobs_first_order.elt"))
    assert code == 3 and "routes agree" in out


def test_gauge_commands(capsys):
    args = ("zoo:End(k + k[-1])", "t^3", s("gauge_small.gauge"), s("end_first_order.elt"))
    code, out = run(capsys, "gauge-act", *args)
    assert code == 0
    code, out = run(capsys, "one-simplex", *args)
    assert code == 0 and "endpoints match" in out


def test_nerve_and_tangent(capsys):
    code, out = run(capsys, "nerve-pi", "zoo:Labh1", "-i", "0")
    assert code == 0 and "pi_0 = 1" in out
    code, out = run(capsys, "nerve-pi", "zoo:Labh1", "--complex", s("two_term.complex"), "-i", "0")
    assert code == 0
    code, out = run(capsys, "tangent", "zoo:Lobs", "--max", "2")
    assert code == 0 and "dim F(k[eps_0]) = 1" in out


def test_bar_cobar_output_reparses(capsys):
    from mcdeform.textformat import loads
    code, out = run(capsys, "bar", "zoo:Lobs", "--order", "2")
    assert code == 0 and loads(out).validate()
    code, out = run(capsys, "cobar", "k[eps0]", "--order", "2")
    assert code == 0 and loads(out).dims() == {1: 1, 2: 1}


def test_adjunction_and_counit(capsys):
    code, out = run(capsys, "adjunction-check", s("lobs.dgla"), "t^2", s("lobs_first_order.elt"))
    assert code == 0 and out.count("ok") == 2
    code, out = run(capsys, "counit-check", "zoo:Heis", "--weight", "2")
    assert code == 0 and "weight 2: acyclic" in out


def test_denormalize_and_tot(capsys):
    code, out = run(capsys, "denormalize", s("bigraded_one.bigraded"), "--levels", "2")
    assert code == 0 and "identities hold" in out
    code, out = run(capsys, "tot", s("bigraded_one.bigraded"))
    assert code == 0 and "y -> x" in out


def test_battery(capsys):
    code, out = run(capsys, "--json", "battery", "zoo:Labh1", "--kind", "mc", "--which", "manetti")
    assert code == 0
    assert "pre-deformation functor" in out


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.dgla"
    bad.write_text("[meta]\nkind = dgla\n[space]\nu : one\n")
    code = main(["validate", str(bad)])
    err = capsys.readouterr()
    assert code == 4
    assert "line 4" in err.out + err.err


def test_validation_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.dgla"
    bad.write_text("[meta]\nkind = dgla\n[space]\nx : 0\ny : 0\n[bracket]\nx, y -> x\n")
    assert main(["validate", str(bad)]) == 2


def test_unknown_zoo_name(capsys):
    assert main(["validate", "zoo:nothing"]) in (2, 4)
