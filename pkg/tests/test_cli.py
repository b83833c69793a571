import json
import subprocess
import sys

import pytest

import semimod as sm
from semimod import Flavor
from semimod.cli import main
from semimod.serialize import hom_to_doc, module_to_doc

from conftest import diamond_m3


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_d0_json(capsys):
    code, out, _ = run_cli(capsys, "construct", "D0")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["elements"]) == 9
    assert doc["flavor"] == "B"


def test_construct_dn_requires_n(capsys):
    code, _, err = run_cli(capsys, "construct", "Dn")
    assert code == 3
    assert "requires --n" in err


def test_construct_d0_dot(capsys):
    code, out, _ = run_cli(capsys, "construct", "D0", "--format", "dot")
    assert code == 0
    nodes = [l for l in out.splitlines() if l.endswith('";') and "->" not in l]
    assert len(nodes) == 9


def test_construct_free(capsys):
    code, out, _ = run_cli(capsys, "construct", "free", "--flavor", "Finf", "--rank", "2")
    assert code == 0
    assert len(json.loads(out)["elements"]) == 9


@pytest.mark.parametrize(
    "argv",
    [
        ("construct", "D0"),
        ("construct", "E0"),
        ("construct", "Dn", "--n", "5"),
        ("construct", "En", "--n", "3"),
        ("construct", "free", "--flavor", "B", "--rank", "3"),
    ],
)
def test_construct_then_validate_round_trip(argv, tmp_path, capsys):
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    path = tmp_path / "mod.json"
    path.write_text(out)
    code, out2, _ = run_cli(capsys, "validate", str(path))
    assert code == 0
    assert out2.strip() == "valid"


def test_validate_reports_violations(tmp_path, capsys):
    f = sm.scalar_module(Flavor.FINF)
    doc = module_to_doc(f, canonical=False)
    one = f.index_of_name["1"]
    doc["add"][f.zero * f.size + one] = one
    doc["add"][one * f.size + f.zero] = one
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "validate", str(path))
    assert code == 1
    assert "zero_absorbing" in out


def test_validate_structural_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"flavor": "B", "elements": ["0"], "zero": 0, "add": []}))
    code, _, err = run_cli(capsys, "validate", str(path))
    assert code == 3
    assert "error" in err


def test_homs_enumeration_stream(capsys):
    code, out, err = run_cli(capsys, "homs", "--source", "B", "--target", "B")
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines()]
    assert [tuple(l["map"]) for l in lines] == [(0, 0), (0, 1)]
    assert "2 morphisms" in err


def test_homs_with_pins_file(tmp_path, capsys):
    pins = {"pins": [["a_1_2", "a_2_2"]]}
    path = tmp_path / "pins.json"
    path.write_text(json.dumps(pins))
    code, out, _ = run_cli(
        capsys, "homs", "--source", "D2", "--target", "D2", "--pins", str(path)
    )
    assert code == 0
    assert out.strip()


def test_homs_bad_reference_is_input_error(capsys):
    code, _, err = run_cli(capsys, "homs", "--source", "nonsense", "--target", "B")
    assert code == 3
    assert "error" in err


def test_projective_budget_exhaustion_is_inconclusive(capsys):
    code, _, err = run_cli(capsys, "projective", "D5", "--budget", "3")
    assert code == 2
    assert "inconclusive" in err


def test_homs_budget_exceeded_is_inconclusive(capsys):
    code, _, err = run_cli(
        capsys, "homs", "--source", "D4", "--target", "D5", "--budget", "10"
    )
    assert code == 2
    assert "inconclusive" in err


def test_rigidity_identity_case(capsys):
    code, out, _ = run_cli(capsys, "rigidity", "--flavor", "B", "--n", "3", "--m", "3")
    assert code == 0
    assert "1 morphism (identity)" in out


def test_rigidity_mismatch_case(capsys):
    code, out, _ = run_cli(capsys, "rigidity", "--flavor", "Finf", "--n", "3", "--m", "4")
    assert code == 0
    assert "0 morphisms" in out


def test_split_check_positive(tmp_path, capsys):
    emb = sm.corner_embedding(4, Flavor.B)
    doc = hom_to_doc(emb, source_ref="D0", target_ref="D4")
    path = tmp_path / "emb.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "split-check", str(path))
    assert code == 0
    res = json.loads(out)
    assert res["injective"] and res["left_inverse"] is not None


def test_split_check_negative(tmp_path, capsys):
    m3 = diamond_m3()
    free = sm.free_module(Flavor.B, 3)
    img = {"0": [], "a": [(0, 1), (1, 1)], "b": [(1, 1), (2, 1)],
           "c": [(0, 1), (2, 1)], "1": [(0, 1), (1, 1), (2, 1)]}
    emb = sm.Hom(
        m3, free, tuple(sm.element_of_support(free, img[m3.name(e)]) for e in range(m3.size))
    )
    doc = hom_to_doc(emb, target_ref="free:B:3")
    path = tmp_path / "m3emb.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "split-check", str(path))
    assert code == 1
    res = json.loads(out)
    assert res["left_inverse"] is None and res["right_inverse"] is None


def test_split_check_rejects_non_hom(tmp_path, capsys):
    d2 = sm.construct_Dn(2).module
    bad = sm.Hom(d2, d2, tuple([d2.size - 1] * d2.size))
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(hom_to_doc(bad, source_ref="D2", target_ref="D2")))
    code, _, err = run_cli(capsys, "split-check", str(path))
    assert code == 3
    assert "not a homomorphism" in err


def test_projective_positive(capsys):
    code, out, _ = run_cli(capsys, "projective", "D4")
    assert code == 0
    res = json.loads(out)
    assert res["projective"] and res["distributive"] and res["criteria_agree"]


def test_projective_negative(tmp_path, capsys):
    path = tmp_path / "m3.json"
    path.write_text(json.dumps(module_to_doc(diamond_m3())))
    code, out, _ = run_cli(capsys, "projective", str(path))
    assert code == 1
    res = json.loads(out)
    assert not res["projective"] and not res["distributive"] and res["criteria_agree"]


def test_factor_matrix_worked_example(tmp_path, capsys):
    path = tmp_path / "mat.json"
    path.write_text(json.dumps([[1, 1], [1, 1], [0, 1]]))
    code, out, _ = run_cli(capsys, "factor-matrix", str(path))
    assert code == 0
    res = json.loads(out)
    assert res["reduced"]["entries"] == [[1, 1], [0, 1]]
    assert res["duplicator"]["entries"] == [[1, 0], [1, 0], [0, 1]]
    assert res["row_class"] == [0, 0, 1]


def test_dualize(tmp_path, capsys):
    mat = sm.BoolMatrix.from_rows(Flavor.B, [[1, 0], [1, 1], [0, 0]])
    f = sm.hom_of_matrix(mat)
    doc = hom_to_doc(f, source_ref="free:B:2", target_ref="free:B:3")
    path = tmp_path / "f.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "dualize", str(path))
    assert code == 0
    res = json.loads(out)
    assert res["matrix"]["entries"] == [[1, 1, 0], [0, 1, 0]]


def test_dualize_rejects_non_free(tmp_path, capsys):
    emb = sm.corner_embedding(4, Flavor.B)
    path = tmp_path / "emb.json"
    path.write_text(json.dumps(hom_to_doc(emb, source_ref="D0", target_ref="D4")))
    code, _, err = run_cli(capsys, "dualize", str(path))
    assert code == 3


def test_witness_command(capsys):
    code, out, _ = run_cli(capsys, "witness", "--flavor", "B", "--max-n", "2")
    assert code == 0
    assert "witness holds up to N=2" in out


def test_witness_inconclusive_budget(capsys):
    code, out, _ = run_cli(
        capsys, "witness", "--flavor", "B", "--max-n", "2", "--budget", "5"
    )
    assert code == 2
    assert "inconclusive" in out


def test_witness_from_spec_file(tmp_path, capsys):
    path = tmp_path / "witness.json"
    path.write_text(json.dumps({"flavor": "B", "max_n": 2, "class": "injections"}))
    code, out, _ = run_cli(capsys, "witness", "--spec", str(path))
    assert code == 0
    assert "witness holds up to N=2" in out


def test_witness_needs_parameters(capsys):
    code, _, err = run_cli(capsys, "witness")
    assert code == 3


def test_witness_json_format(capsys):
    code, out, _ = run_cli(
        capsys, "witness", "--flavor", "Finf", "--max-n", "1", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["holds"] is True


def test_export_dot(capsys):
    code, out, _ = run_cli(capsys, "export-dot", "E2")
    assert code == 0
    assert out.startswith("digraph")


def test_unknown_subcommand_exits_3(capsys):
    code, _, err = run_cli(capsys, "frobnicate")
    assert code == 3
    assert "usage" in err


def test_unknown_flag_exits_3(capsys):
    code, _, err = run_cli(capsys, "rigidity", "--flavor", "B", "--n", "3", "--zzz", "1")
    assert code == 3


def test_bad_threads_value(capsys):
    code, _, err = run_cli(capsys, "construct", "D0", "--threads", "0")
    assert code == 3


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "semimod.cli", "construct", "D0", "--format", "text"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "9 elements" in proc.stdout
