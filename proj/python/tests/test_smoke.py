import hextm


def test_board_round_trip_and_winner():
    b = hextm.Board().play("d2").play("f1")
    assert b.move_count == 2
    assert b.to_move == "black"
    assert hextm.Board.from_text(b.to_text()) == b
    assert hextm.Board.from_flat(b.to_flat()) == b
    assert b.winner() == "none"
    bits = hextm.encode(b)
    assert bits[9] == "1" and bits[36 + 5] == "1" and bits.count("1") == 2
    assert hextm.decode(bits) == b


def test_errors_map_to_python_exceptions():
    b = hextm.Board().play("a1")
    try:
        b.play("a1")
    except hextm.RejectedMove:
        pass
    else:
        raise AssertionError("occupied cell accepted")
    try:
        hextm.Board.from_flat("BB" + "." * 34)
    except ValueError:
        pass
    else:
        raise AssertionError("illegal counts accepted")


def test_generate_train_predict_interpret(tmp_path):
    records = hextm.generate_dataset(n_games=20, playouts=5, seed=3)
    assert len(records) > 100
    assert {r.label for r in records} <= {0, 1}
    assert all(r.move_count == r.bits.count("1") for r in records)

    model = hextm.Model(hextm.TMConfig(n_clauses=40, T=20, s=5.0, epochs=3))
    seen = []
    acc = model.fit(records, lambda e, a: seen.append(e))
    assert seen == [1, 2, 3] and len(acc) == 3

    path = tmp_path / "m.hextm"
    model.save(path)
    again = hextm.Model.load(path)
    board = records[0].board()
    assert hextm.predict(again, board) == hextm.predict(model, board)
    assert hextm.predict(model, board)["voteSum"] == model.vote_sum(board)

    heat = hextm.interpret(model, board)
    assert len(heat["blackCounts"]) == 36 and len(heat["whiteCounts"]) == 36

    top = hextm.top_clauses(model, records, "negative", k=5, alpha=10)
    assert len(top["clauses"]) == 5
    assert all(c["polarity"] == "negative" for c in top["clauses"])
    assert 0.0 <= hextm.evaluate(model, records)["testAccuracy"] <= 1.0


def test_cli_entry_point(tmp_path):
    out = tmp_path / "d.txt"
    code, stdout, _ = hextm.run_cli(["generate", "--games", "3", "--playouts", "2", "--out", str(out)])
    assert code == 0 and "records:" in stdout
    assert len(hextm.read_dataset(out)) > 0
    code, _, _ = hextm.run_cli(["train", "--epochs", "0", "--data", str(out), "--out-model", "x"])
    assert code == 2
