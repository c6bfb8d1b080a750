//! Python bindings: build games, evaluate strategies, compute best responses and run solvers.
//!
//! Strategies cross the boundary as one list of action probabilities per infoset, in the
//! game's infoset order. Players are numbered 1 and 2.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyFloat, PyInt, PyString};

use rmdo::bench::{self, GameStats};
use rmdo::{BehaviorStrategy, GameSpec, GameTree, JointStrategy, Player, Population, RunError};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn run_error(e: RunError) -> PyErr {
    match e {
        RunError::Config(_) | RunError::Game(_) | RunError::Strategy(_) => value_error(e),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn player(number: u8) -> PyResult<Player> {
    match number {
        1 => Ok(Player::One),
        2 => Ok(Player::Two),
        _ => Err(PyValueError::new_err(format!("player must be 1 or 2, got {number}"))),
    }
}

fn strategy(game: &GameTree, owner: Player, rows: Vec<Vec<f64>>) -> PyResult<BehaviorStrategy> {
    let s = BehaviorStrategy::from_rows(owner, rows).map_err(value_error)?;
    s.validate_for(game).map_err(value_error)?;
    Ok(s)
}

fn joint(game: &GameTree, p1: Vec<Vec<f64>>, p2: Vec<Vec<f64>>) -> PyResult<JointStrategy> {
    JointStrategy::new(strategy(game, Player::One, p1)?, strategy(game, Player::Two, p2)?).map_err(value_error)
}

fn admitted_lists(population: &Population, game: &GameTree) -> [Vec<Vec<usize>>; 2] {
    Player::BOTH.map(|p| {
        (0..game.infoset_count(p))
            .map(|s| population.admitted(p, s).to_vec())
            .collect()
    })
}

/// A built game. `Game("kuhn:pot=2")` takes the same spec text as the command line.
#[pyclass(frozen, module = "pyrmdo")]
struct Game {
    spec: GameSpec,
    tree: GameTree,
}

#[pymethods]
impl Game {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let spec: GameSpec = spec.parse().map_err(value_error)?;
        let tree = spec.build().map_err(value_error)?;
        Ok(Self { spec, tree })
    }

    #[getter]
    fn spec(&self) -> String {
        self.spec.to_string()
    }

    #[getter]
    fn nodes(&self) -> usize {
        self.tree.num_nodes()
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.tree.delta()
    }

    fn infoset_count(&self, player_number: u8) -> PyResult<usize> {
        Ok(self.tree.infoset_count(player(player_number)?))
    }

    /// Infoset keys of a player, in strategy-row order.
    fn infosets(&self, player_number: u8) -> PyResult<Vec<String>> {
        let p = player(player_number)?;
        Ok(self.tree.infosets(p).iter().map(|s| s.key().to_owned()).collect())
    }

    fn actions(&self, player_number: u8, infoset: usize) -> PyResult<Vec<String>> {
        let p = player(player_number)?;
        if infoset >= self.tree.infoset_count(p) {
            return Err(PyValueError::new_err(format!("no infoset {infoset}")));
        }
        Ok(self.tree.infoset(p, infoset).actions().to_vec())
    }

    fn uniform(&self, player_number: u8) -> PyResult<Vec<Vec<f64>>> {
        Ok(BehaviorStrategy::uniform(&self.tree, player(player_number)?).to_rows())
    }

    /// Expected payoff to player one.
    fn expected_value(&self, p1: Vec<Vec<f64>>, p2: Vec<Vec<f64>>) -> PyResult<f64> {
        Ok(rmdo::expected_value(&self.tree, &joint(&self.tree, p1, p2)?))
    }

    fn exploitability(&self, p1: Vec<Vec<f64>>, p2: Vec<Vec<f64>>) -> PyResult<f64> {
        rmdo::exploitability(&self.tree, &joint(&self.tree, p1, p2)?).map_err(value_error)
    }

    /// Best response of `player_number` to `opponent`: `(value, action per infoset, rows)`.
    fn best_response(
        &self,
        opponent: Vec<Vec<f64>>,
        player_number: u8,
    ) -> PyResult<(f64, Vec<usize>, Vec<Vec<f64>>)> {
        let p = player(player_number)?;
        let opp = strategy(&self.tree, p.opponent(), opponent)?;
        let br = rmdo::best_response(&self.tree, &opp, p).map_err(value_error)?;
        Ok((br.value, br.actions, br.strategy.to_rows()))
    }

    /// Runs a solver. Keyword options are config keys (`algo`, `period`, `target_eps`, ...).
    #[pyo3(signature = (**options))]
    fn solve(&self, py: Python<'_>, options: Option<&Bound<'_, PyDict>>) -> PyResult<RunResult> {
        let mut table = toml::Table::new();
        if let Some(options) = options {
            for (key, value) in options.iter() {
                let key: String = key.extract()?;
                table.insert(key, toml_value(&value)?);
            }
        }
        if table.contains_key("game") || bench::GAME_PARAM_KEYS.iter().any(|k| table.contains_key(*k)) {
            return Err(PyValueError::new_err("game keys are fixed by the Game object"));
        }
        table.insert("game".into(), toml::Value::String(self.spec.to_string()));
        let config = bench::config_from_table(table).map_err(run_error)?;
        let result = py
            .detach(|| rmdo::run_on(&self.tree, &config, &mut rmdo::driver::NoObserver))
            .map_err(run_error)?;
        let csv = result.log.to_csv_string().map_err(run_error)?;
        Ok(RunResult {
            iterations: result.iterations,
            visited: result.visited,
            final_exploitability: result.final_exploitability,
            k: result.k,
            windows: result.window_lengths.clone(),
            stop_reason: format!("{:?}", result.stop_reason),
            output: Player::BOTH.map(|p| result.output.get(p).to_rows()).into(),
            log: result
                .log
                .rows()
                .iter()
                .map(|r| (r.iteration, r.visited_infosets, r.wall_time_s, r.exploitability, r.window, r.population_size))
                .collect(),
            populations: result
                .populations
                .iter()
                .map(|pop| admitted_lists(pop, &self.tree).into())
                .collect(),
            csv,
        })
    }

    /// `{"infosets_p1", "infosets_p2", "nodes", "delta"}`.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = GameStats::of(&self.tree);
        let d = PyDict::new(py);
        d.set_item("infosets_p1", s.infosets_p1)?;
        d.set_item("infosets_p2", s.infosets_p2)?;
        d.set_item("nodes", s.nodes)?;
        d.set_item("delta", s.delta)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Game('{}')", self.spec)
    }
}

fn toml_value(value: &Bound<'_, PyAny>) -> PyResult<toml::Value> {
    if value.is_instance_of::<PyBool>() {
        Ok(toml::Value::Boolean(value.extract()?))
    } else if value.is_instance_of::<PyInt>() {
        Ok(toml::Value::Integer(value.extract()?))
    } else if value.is_instance_of::<PyFloat>() {
        Ok(toml::Value::Float(value.extract()?))
    } else if value.is_instance_of::<PyString>() {
        Ok(toml::Value::String(value.extract()?))
    } else {
        Err(PyValueError::new_err(format!("unsupported option value {value}")))
    }
}

/// Outcome of [`Game::solve`].
#[pyclass(frozen, get_all, module = "pyrmdo")]
struct RunResult {
    iterations: u64,
    visited: u64,
    final_exploitability: f64,
    /// Number of time windows.
    k: usize,
    windows: Vec<u64>,
    stop_reason: String,
    /// Output strategy rows of both players.
    output: (Vec<Vec<f64>>, Vec<Vec<f64>>),
    /// `(iteration, visited_infosets, wall_time_s, exploitability, window, population_size)`.
    log: Vec<(u64, u64, f64, f64, u64, u64)>,
    /// Admitted action indices per window, per player, per infoset.
    populations: Vec<(Vec<Vec<usize>>, Vec<Vec<usize>>)>,
    /// The log in the CSV format written by the command line.
    csv: String,
}

#[pymethods]
impl RunResult {
    fn __repr__(&self) -> String {
        format!(
            "RunResult(iterations={}, k={}, final_exploitability={:e})",
            self.iterations, self.k, self.final_exploitability
        )
    }
}

/// Runs the built-in self-checks: `[(name, passed, detail), ...]`.
#[pyfunction]
fn verify() -> Vec<(String, bool, String)> {
    bench::verify()
        .into_iter()
        .map(|o| (o.name, o.passed, o.detail))
        .collect()
}

/// Regret matching of a cumulative regret vector.
#[pyfunction]
fn regret_matching(regrets: Vec<f64>) -> PyResult<Vec<f64>> {
    rmdo::regret_matching(&regrets).map_err(value_error)
}

#[pymodule]
fn pyrmdo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Game>()?;
    m.add_class::<RunResult>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(regret_matching, m)?)?;
    Ok(())
}
