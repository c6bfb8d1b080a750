"""Smoke test for the pyrmdo extension module.

Uses an installed `pyrmdo` if there is one, otherwise the library built by
`cargo build -p rmdo-python [--release]`.
"""

import importlib.util
import math
import pathlib
import sys


def load():
    try:
        import pyrmdo
        return pyrmdo
    except ImportError:
        pass
    target = pathlib.Path(__file__).resolve().parent.parent / "target"
    for profile in ("release", "debug"):
        lib = target / profile / "libpyrmdo.so"
        if lib.exists():
            spec = importlib.util.spec_from_file_location("pyrmdo", lib)
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)
            return module
    sys.exit("pyrmdo is not installed and no built library was found under target/")


def main():
    rmdo = load()

    game = rmdo.Game("paper-example")
    assert game.stats() == {"infosets_p1": 1, "infosets_p2": 1, "nodes": 7, "delta": 4.0}
    assert game.actions(1, 0) == ["L", "R"]
    u1, u2 = game.uniform(1), game.uniform(2)
    assert math.isclose(game.expected_value(u1, u2), 1.25)
    assert math.isclose(game.exploitability(u1, u2), 1.5)
    value, actions, _ = game.best_response(u2, 1)
    assert (value, actions) == (1.5, [0])
    assert game.exploitability([[1.0, 0.0]], [[0.0, 1.0]]) == 0.0

    kuhn = rmdo.Game("kuhn")
    result = kuhn.solve(algo="pdo", period=50, target_eps=1e-3)
    assert result.final_exploitability <= 1e-3, result
    assert result.stop_reason == "TargetReached"
    assert sum(result.windows) == result.iterations
    assert len(result.populations) == result.k
    p1, p2 = result.output
    assert abs(kuhn.expected_value(p1, p2) + 1 / 18) < 1e-2
    assert result.csv.splitlines()[0] == (
        "iteration,visited_infosets,wall_time_s,exploitability,window,population_size"
    )

    try:
        kuhn.solve(algo="pdo", period=0)
    except ValueError as err:
        assert "period" in str(err)
    else:
        raise AssertionError("invalid config accepted")
    try:
        rmdo.Game("chess")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown game accepted")

    assert rmdo.regret_matching([1.0, -2.0, 3.0]) == [0.25, 0.0, 0.75]
    checks = rmdo.verify()
    assert all(passed for _, passed, _ in checks), checks

    print(f"pyrmdo smoke test passed ({result!r})")


if __name__ == "__main__":
    main()
