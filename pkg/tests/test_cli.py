import json
import os
import subprocess
import sys

import pytest

from sphererank.cli import (
    EXIT_BAD_JSON,
    EXIT_GUARD,
    EXIT_OK,
    EXIT_UNKNOWN_COMMAND,
    EXIT_VALIDATION,
    dispatch,
    load_family,
    load_ideal,
    load_table,
)
from sphererank.errors import SchemaError
from sphererank.forms import random_family
from sphererank.repaction import quaternion_table


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


@pytest.fixture
def d8_family_file(tmp_path):
    path = tmp_path / "d8.json"
    path.write_text(json.dumps({"n": 2, "t": 1, "forms": [["01", "10"]]}))
    return str(path)


@pytest.fixture
def q8_table_file(tmp_path):
    path = tmp_path / "q8.json"
    path.write_text(json.dumps({"order": 8, "mul": quaternion_table()}))
    return str(path)


@pytest.fixture
def powers_ideal_file(tmp_path):
    path = tmp_path / "powers_m3_n2.json"
    gens = [{"monomials": [[4, 0]]}, {"monomials": [[0, 4]]}]
    path.write_text(json.dumps({"nvars": 2, "gens": gens}))
    return str(path)


class TestDispatchContract:
    def test_unknown_subcommand(self, capsys):
        code, obj = run(capsys, "frobnicate", "now")
        assert code == EXIT_UNKNOWN_COMMAND
        assert obj["error"]["code"] == "unknown_command"

    def test_unknown_subaction(self, capsys):
        code, obj = run(capsys, "bounds", "frobnicate")
        assert code == EXIT_UNKNOWN_COMMAND

    def test_missing_flag_is_validation_error(self, capsys):
        code, obj = run(capsys, "bounds", "headline", "--n", "3")
        assert code == EXIT_VALIDATION
        assert obj["error"]["code"] == "validation"

    def test_malformed_json_input(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, obj = run(capsys, "group", "rank", "--family", str(bad))
        assert code == EXIT_BAD_JSON

    def test_schema_violation_lists_fields(self, capsys, tmp_path):
        bad = tmp_path / "bad_family.json"
        bad.write_text(json.dumps({"n": 2, "t": 1, "forms": [["01", "00"]]}))
        code, obj = run(capsys, "group", "rank", "--family", str(bad))
        assert code == EXIT_VALIDATION
        assert any("forms[0]" in f for f in obj["error"]["fields"])

    def test_guard_exceeded_exit_code(self, capsys, tmp_path):
        big = tmp_path / "big.json"
        n = 22
        zero_rows = ["0" * n] * n
        big.write_text(json.dumps({"n": n, "t": 1, "forms": [zero_rows]}))
        code, obj = run(capsys, "group", "rank", "--family", str(big))
        assert code == EXIT_GUARD
        assert obj["error"]["code"] == "guard_exceeded"
        assert "bnb" in obj["error"]["guard"]

    def test_report_shape(self, capsys):
        code, obj = run(capsys, "bounds", "rp-rank", "--m", "3", "--n", "5")
        assert code == EXIT_OK
        assert set(obj) == {"command", "inputs", "result", "provenance", "version"}
        assert obj["result"]["free_rank"] == 10
        assert obj["result"]["caveat_small_m"] is True
        assert "small_sphere_caveat" in obj["provenance"]["guards_hit"]


class TestHeadline:
    def test_headline_report_values(self, capsys):
        code, obj = run(capsys, "bounds", "headline", "--n", "1249", "--t", "50", "--k", "51")
        assert code == EXIT_OK
        res = obj["result"]
        assert res["condition_holds"] is True
        assert res["T_bound"] == 100 and res["N_bound"] == 1199
        assert res["sphere_dim_digits"] == 391
        assert int(res["sphere_dim"]) == 2**1298 - 1
        assert res["browder_min_m"] == 11
        assert res["carlsson_paper_weak"] == "2047"
        assert res["carlsson_exact"] == "4067"


class TestGroupCommands:
    def test_group_rank_d8(self, capsys, d8_family_file):
        code, obj = run(capsys, "group", "rank", "--family", d8_family_file)
        assert code == EXIT_OK
        assert obj["result"]["rank"] == 2
        assert obj["result"]["isotropic_dim"] == 1

    def test_group_rank_modes_agree(self, capsys, d8_family_file):
        _, a = run(capsys, "group", "rank", "--family", d8_family_file, "--mode", "bnb")
        _, b = run(capsys, "group", "rank", "--family", d8_family_file, "--mode", "exhaustive")
        assert a["result"]["rank"] == b["result"]["rank"]

    def test_group_info(self, capsys, d8_family_file):
        code, obj = run(capsys, "group", "info", "--family", d8_family_file)
        assert code == EXIT_OK
        res = obj["result"]
        assert res["order"] == "8" and res["center_rank"] == 1

    def test_group_profile(self, capsys, d8_family_file):
        code, obj = run(capsys, "group", "profile", "--family", d8_family_file)
        assert code == EXIT_OK
        assert obj["result"]["T"] == 2 and obj["result"]["N"] == 1

    def test_search_olshanskii(self, capsys):
        code, obj = run(
            capsys, "search", "olshanskii",
            "--n", "5", "--t", "4", "--k", "4", "--trials", "50", "--seed", "0",
        )
        assert code == EXIT_OK
        res = obj["result"]
        assert res["condition_holds"] and res["found"]
        assert res["rank_target"] == 7
        assert res["family"]["n"] == 5 and res["family"]["t"] == 4

    def test_search_olshanskii_headline_scale_reports_condition(self, capsys):
        code, obj = run(
            capsys, "search", "olshanskii",
            "--n", "1249", "--t", "50", "--k", "51", "--trials", "5",
        )
        assert code == EXIT_OK
        res = obj["result"]
        assert res["condition_holds"] is True and res["found"] is False
        assert "max_isotropic_bnb" in obj["provenance"]["guards_hit"]


class TestFormsCommands:
    def test_gen_save_and_reload(self, capsys, tmp_path):
        fam_path = tmp_path / "fam.json"
        code, obj = run(
            capsys, "forms", "gen", "--n", "4", "--t", "2", "--seed", "9",
            "--save-family", str(fam_path),
        )
        assert code == EXIT_OK
        loaded = load_family(str(fam_path))
        assert loaded == random_family(4, 2, 9)
        assert obj["result"]["family"] == loaded.to_json_dict()

    def test_czero(self, capsys, tmp_path):
        sys_path = tmp_path / "sys.json"
        sys_path.write_text(json.dumps({"v": 3, "polys": [[[0, 1]]]}))
        code, obj = run(capsys, "forms", "czero", "--system", str(sys_path))
        assert code == EXIT_OK
        assert obj["result"]["zero"] is not None

    def test_czero_none(self, capsys, tmp_path):
        sys_path = tmp_path / "aniso.json"
        sys_path.write_text(json.dumps({"v": 2, "polys": [[[0, 0], [0, 1], [1, 1]]]}))
        code, obj = run(capsys, "forms", "czero", "--system", str(sys_path))
        assert code == EXIT_OK
        assert obj["result"]["zero"] is None


class TestRepCommands:
    def test_free_on_family_defaults(self, capsys, d8_family_file):
        code, obj = run(capsys, "rep", "free", "--family", d8_family_file)
        assert code == EXIT_OK
        # D8 is not 2-central, so the stock construction is not free
        assert obj["result"]["free"] is False

    def test_free_on_quaternion_table(self, capsys, q8_table_file):
        code, obj = run(
            capsys, "rep", "free", "--table", q8_table_file,
            "--reps", '[{"c_gens": [1], "chars": [-1]}]',
        )
        assert code == EXIT_OK
        assert obj["result"]["free"] is True

    def test_table_requires_reps(self, capsys, q8_table_file):
        code, obj = run(capsys, "rep", "free", "--table", q8_table_file)
        assert code == EXIT_VALIDATION

    def test_isotropy(self, capsys, d8_family_file):
        code, obj = run(capsys, "rep", "isotropy", "--family", d8_family_file)
        assert code == EXIT_OK
        assert obj["result"]["rank"] >= 1  # reflections fix product points

    def test_twocentral(self, capsys, d8_family_file, q8_table_file):
        _, d8 = run(capsys, "rep", "twocentral", "--family", d8_family_file)
        _, q8 = run(capsys, "rep", "twocentral", "--table", q8_table_file)
        assert d8["result"]["two_central"] is False
        assert q8["result"]["two_central"] is True


class TestPolyCommands:
    def test_regseq_powers(self, capsys, powers_ideal_file):
        code, obj = run(capsys, "poly", "regseq", "--ideal", powers_ideal_file)
        assert code == EXIT_OK
        assert obj["result"]["regular"] is True
        assert obj["result"]["total_dim"] == 16

    def test_hilbert(self, capsys, powers_ideal_file):
        code, obj = run(capsys, "poly", "hilbert", "--ideal", powers_ideal_file, "--degree", "3")
        assert code == EXIT_OK
        assert obj["result"]["dim"] == 4

    def test_euler(self, capsys, q8_table_file):
        code, obj = run(
            capsys, "poly", "euler", "--table", q8_table_file,
            "--c-gens", "1", "--chars", "-1", "--e-gens", "1", "--e-rank", "1",
        )
        assert code == EXIT_OK
        assert obj["result"]["euler"]["monomials"] == [[4]]

    def test_powertest(self, capsys, tmp_path):
        act = tmp_path / "swap.json"
        act.write_text(json.dumps({"nvars": 2, "generators": [["01", "10"]]}))
        code, obj = run(
            capsys, "poly", "powertest", "--action", str(act),
            "--ys", "[[1,0],[1,1]]", "--p", "2",
        )
        assert code == EXIT_OK
        assert obj["result"]["stable"] is True and obj["result"]["permuted"] is False


class TestLoaders:
    def test_load_table_validates(self, tmp_path):
        path = tmp_path / "bad_table.json"
        path.write_text(json.dumps({"order": 2, "mul": [[1, 0], [0, 1]]}))
        with pytest.raises(SchemaError):
            load_table(str(path))

    def test_load_dihedral_table(self, tmp_path):
        from oracles import dihedral_table

        path = tmp_path / "d8_table.json"
        path.write_text(json.dumps({"order": 8, "mul": dihedral_table(4)}))
        oracle = load_table(str(path))
        assert oracle.order == 8 and oracle.provenance == "cayley_table"

    def test_load_ideal_reports_failing_gen(self, tmp_path):
        path = tmp_path / "bad_ideal.json"
        path.write_text(json.dumps({"nvars": 2, "gens": [{"monomials": [[1, 0], [2, 0]]}]}))
        with pytest.raises(SchemaError) as exc:
            load_ideal(str(path))
        assert any("gens[0]" in f for f in exc.value.fields)


class TestDeterminism:
    def test_byte_identical_across_runs_and_hash_seeds(self, tmp_path):
        env_a = dict(os.environ, PYTHONHASHSEED="1")
        env_b = dict(os.environ, PYTHONHASHSEED="271828")
        cmds = [
            ["search", "olshanskii", "--n", "4", "--t", "2", "--k", "3",
             "--trials", "20", "--seed", "7"],
            ["forms", "gen", "--n", "5", "--t", "3", "--seed", "11"],
            ["bounds", "headline", "--n", "40", "--t", "7", "--k", "9"],
        ]
        for cmd in cmds:
            outs = [
                subprocess.run(
                    [sys.executable, "-m", "sphererank.cli", *cmd],
                    capture_output=True, env=env, check=True,
                ).stdout
                for env in (env_a, env_b, env_a)
            ]
            assert outs[0] == outs[1] == outs[2]

    def test_out_flag_writes_report(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        code = dispatch(["bounds", "rp-rank", "--m", "11", "--n", "2", "--out", str(out)])
        assert code == EXIT_OK
        assert json.loads(out.read_text())["result"]["free_rank"] == 4
