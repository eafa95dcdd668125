from dpdistinct.cli import main


def run_cli(*argv):
    return main(list(argv))


def gen(tmp_path, name, *extra):
    path = tmp_path / name
    assert run_cli("gen", "--kind", "random", "--T", "64", "--universe", "32",
                   "--max-occ", "4", "--seed", "7", "--out", str(path), *extra) == 0
    return path


def test_gen_then_run_round_trip(tmp_path):
    stream = gen(tmp_path, "s.txt")
    out = tmp_path / "run.csv"
    code = run_cli("run", "--stream", str(stream), "--seed", "3", "--occ-bound", "4",
                   "--with-exact", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,estimate,exact,chosen_level,n_too_high,blocklist_size"
    assert len([l for l in lines if not l.startswith("#")]) == 65  # header + 64 rows
    assert any(l.startswith("# max_additive_error=") for l in lines)
    assert any(l.startswith("# approx_alpha=") for l in lines)
    assert any(l.startswith("# blocklist_fn=") for l in lines)


def test_run_byte_identical_across_invocations(tmp_path):
    stream = gen(tmp_path, "s.txt")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run_cli("run", "--stream", str(stream), "--seed", "11", "--no-bound",
                       "--out", str(out)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_exact_column_only_with_flag(tmp_path):
    stream = gen(tmp_path, "s.txt")
    out = tmp_path / "run.csv"
    assert run_cli("run", "--stream", str(stream), "--seed", "3", "--no-bound",
                   "--out", str(out)) == 0
    assert out.read_text().splitlines()[0] == "t,estimate,chosen_level,n_too_high,blocklist_size"


def test_exact_column_tracks_insert_delete(tmp_path):
    path = tmp_path / "tiny.txt"
    path.write_text("# T=8 U=6\n+5\n-5\n.\n.\n.\n.\n.\n.\n")
    out = tmp_path / "run.csv"
    assert run_cli("run", "--stream", str(path), "--seed", "0", "--occ-bound", "2",
                   "--with-exact", "--out", str(out)) == 0
    rows = [l.split(",") for l in out.read_text().splitlines()[1:3]]
    assert rows[0][2] == "1"
    assert rows[1][2] == "0"


def test_blank_stream_noiseless_outputs_zero(tmp_path):
    path = tmp_path / "blank.txt"
    path.write_text(".\n.\n.\n.\n.\n.\n.\n.\n")
    out = tmp_path / "run.csv"
    assert run_cli("run", "--stream", str(path), "--seed", "0", "--no-bound",
                   "--noiseless", "--unsafe-test-mode", "--out", str(out)) == 0
    rows = [l.split(",") for l in out.read_text().splitlines()[1:9]]
    assert all(r[1] == "0.0" for r in rows)


def test_noiseless_requires_unsafe_flag(tmp_path, capsys):
    stream = gen(tmp_path, "s.txt")
    code = run_cli("run", "--stream", str(stream), "--seed", "3", "--no-bound", "--noiseless")
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert len(err.strip().splitlines()) == 1


def test_malformed_line_reports_lineno(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("+1\n*2\n")
    code = run_cli("run", "--stream", str(path), "--seed", "1", "--no-bound")
    assert code == 2
    err = capsys.readouterr().err
    assert "line 2" in err
    assert len(err.strip().splitlines()) == 1


def test_occurrency_violation_rejected(tmp_path, capsys):
    path = tmp_path / "occ.txt"
    path.write_text("+1\n-1\n+1\n-1\n+1\n-1\n+1\n-1\n")
    code = run_cli("run", "--stream", str(path), "--seed", "1", "--occ-bound", "2")
    assert code == 2
    assert "occurrency" in capsys.readouterr().err


def test_unknown_flag_single_line_error(capsys):
    assert run_cli("run", "--nope") == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert len(err.strip().splitlines()) == 1


def test_invalid_deletion_rejected(tmp_path, capsys):
    path = tmp_path / "neg.txt"
    path.write_text("-1\n.\n.\n.\n.\n.\n.\n.\n")
    code = run_cli("run", "--stream", str(path), "--seed", "1", "--no-bound")
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_gen_hard_matches_library(tmp_path):
    from dpdistinct.harness import gen_hard_instance
    from dpdistinct.streamio import read_stream

    out = tmp_path / "h.txt"
    assert run_cli("gen", "--kind", "hard", "--T", "32", "--W", "2", "--seed", "5",
                   "--out", str(out)) == 0
    parsed, T, U = read_stream(str(out))
    expected, _ = gen_hard_instance(32, 2, 5)
    assert parsed == expected
    assert (T, U) == (32, 16)


def test_gen_hard_requires_w(capsys):
    assert run_cli("gen", "--kind", "hard", "--T", "32", "--seed", "5", "--out", "/tmp/x") == 2


def test_space_report_footer(tmp_path):
    stream = gen(tmp_path, "s.txt")
    out = tmp_path / "run.csv"
    assert run_cli("run", "--stream", str(stream), "--seed", "3", "--no-bound",
                   "--space-report", "--out", str(out)) == 0
    assert any(l.startswith("# space kset_cells=") for l in out.read_text().splitlines())


def test_run_plot_renders_file(tmp_path):
    stream = gen(tmp_path, "s.txt")
    fig = tmp_path / "fig.png"
    assert run_cli("run", "--stream", str(stream), "--seed", "3", "--no-bound",
                   "--out", str(tmp_path / "o.csv"), "--plot", str(fig)) == 0
    assert fig.stat().st_size > 0


def test_trials_cli_sensitivity(tmp_path, capsys):
    out = tmp_path / "t.csv"
    fig = tmp_path / "t.png"
    code = run_cli("trials", "--suite", "sensitivity", "--trials", "5", "--seed", "5",
                   "--out", str(out), "--plot", str(fig))
    assert code == 0
    text = out.read_text()
    assert text.splitlines()[0] == "trial,dist_sq,bound"
    assert "verdict=pass" in text.splitlines()[-1]
    assert fig.stat().st_size > 0


def test_trials_coupling_precondition_unmet(tmp_path, capsys):
    code = run_cli("trials", "--suite", "coupling", "--trials", "3", "--seed", "5",
                   "--k", "100", "--out", str(tmp_path / "c.csv"))
    assert code == 0
    assert "precondition-unmet" in (tmp_path / "c.csv").read_text()


def test_trials_cli_blocklist_and_space(tmp_path):
    out = tmp_path / "b.csv"
    assert run_cli("trials", "--suite", "blocklist", "--trials", "2", "--seed", "5",
                   "--out", str(out), "--plot", str(tmp_path / "b.png")) == 0
    text = out.read_text()
    assert text.splitlines()[0].startswith("trial,fn,fp_entries")
    assert "verdict=pass" in text.splitlines()[-1]
    assert (tmp_path / "b.png").stat().st_size > 0

    out2 = tmp_path / "sp.csv"
    assert run_cli("trials", "--suite", "space", "--seed", "5", "--out", str(out2)) == 0
    assert "growth_ratio" in out2.read_text()


def test_trials_cli_coupling_pass(tmp_path):
    out = tmp_path / "c.csv"
    assert run_cli("trials", "--suite", "coupling", "--trials", "4", "--seed", "5",
                   "--out", str(out)) == 0
    assert "verdict=pass" in out.read_text().splitlines()[-1]


def test_trials_unknown_suite_rejected(capsys):
    assert run_cli("trials", "--suite", "nope", "--seed", "1") == 2


def test_trials_cli_accuracy_smoke(tmp_path):
    out = tmp_path / "a.csv"
    fig = tmp_path / "a.png"
    assert run_cli("trials", "--suite", "accuracy", "--trials", "1", "--seed", "5",
                   "--out", str(out), "--plot", str(fig)) == 0
    text = out.read_text()
    assert text.splitlines()[0] == "trial,all_steps_pass,max_additive_error"
    assert "dense_multiplicative_ok=1" in text.splitlines()[-1]
    assert fig.stat().st_size > 0


def test_gen_output_reingests_for_many_seeds(tmp_path):
    from dpdistinct.streamio import read_stream

    for seed in range(100):
        path = tmp_path / "g.txt"
        assert run_cli("gen", "--kind", "random", "--T", "64", "--universe", "32",
                       "--max-occ", "3", "--seed", str(seed), "--out", str(path)) == 0
        parsed, T, U = read_stream(str(path))
        assert T == 64 and U == 32 and len(parsed) == 64
