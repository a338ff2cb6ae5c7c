"""Episode container and the CSV dataset format.

An episode of L steps holds L+1 observations, L actions and L per-step costs
(the cost returned by step t, i.e. evaluated at the post-step observation).

CSV layout: header `episode,step,s0..s{N-1},a0..a{M-1},cost`, one row per step
ordered by (episode, step), plus one terminal row per episode (step index L)
carrying the final observation with empty action/cost cells. Floats are
written with repr so write -> read -> write is byte-identical.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, ShapeError


@dataclass
class Episode:
    episode_id: int
    observations: np.ndarray  # (L+1, n_obs)
    actions: np.ndarray  # (L, n_act)
    costs: np.ndarray  # (L,)

    def __post_init__(self):
        self.observations = np.asarray(self.observations, dtype=np.float64)
        self.actions = np.asarray(self.actions, dtype=np.float64)
        self.costs = np.asarray(self.costs, dtype=np.float64)
        if self.observations.ndim != 2 or self.actions.ndim != 2:
            raise ShapeError("episode observations/actions must be 2-D arrays")
        if len(self.observations) != len(self.actions) + 1:
            raise ShapeError(
                f"episode needs |observations| = |actions| + 1, got "
                f"{len(self.observations)} and {len(self.actions)}"
            )
        if len(self.costs) != len(self.actions):
            raise ShapeError("episode needs one cost per action")

    def __len__(self) -> int:
        """Number of steps (= number of actions)."""
        return len(self.actions)


@dataclass
class Dataset:
    episodes: list[Episode]

    @property
    def n_steps(self) -> int:
        return sum(len(ep) for ep in self.episodes)

    @property
    def n_obs(self) -> int:
        return self.episodes[0].observations.shape[1]

    @property
    def n_act(self) -> int:
        return self.episodes[0].actions.shape[1]

    @property
    def episode_ids(self) -> set[int]:
        return {ep.episode_id for ep in self.episodes}

    def merged_with(self, other: "Dataset") -> "Dataset":
        return Dataset(self.episodes + other.episodes)


def save_dataset(path: str | Path, dataset: Dataset) -> None:
    if not dataset.episodes:
        raise ConfigError("refusing to write an empty dataset")
    n_obs, n_act = dataset.n_obs, dataset.n_act
    header = (
        ["episode", "step"]
        + [f"s{i}" for i in range(n_obs)]
        + [f"a{i}" for i in range(n_act)]
        + ["cost"]
    )
    lines = [",".join(header)]
    for ep in dataset.episodes:
        for t in range(len(ep)):
            cells = [str(ep.episode_id), str(t)]
            cells += [repr(float(v)) for v in ep.observations[t]]
            cells += [repr(float(v)) for v in ep.actions[t]]
            cells.append(repr(float(ep.costs[t])))
            lines.append(",".join(cells))
        cells = [str(ep.episode_id), str(len(ep))]
        cells += [repr(float(v)) for v in ep.observations[len(ep)]]
        cells += [""] * (n_act + 1)
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def load_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"dataset file not found: {path}")
    lines = path.read_text().splitlines()
    if not lines:
        raise ConfigError(f"dataset file is empty: {path}")
    header = lines[0].split(",")
    n_obs = sum(1 for c in header if c.startswith("s") and c[1:].isdigit())
    n_act = sum(1 for c in header if c.startswith("a") and c[1:].isdigit())
    if n_obs == 0 or header[:2] != ["episode", "step"] or header[-1] != "cost":
        raise ConfigError(f"unrecognized dataset header in {path}")

    episodes: list[Episode] = []
    cur_id: int | None = None
    obs_rows: list[list[float]] = []
    act_rows: list[list[float]] = []
    cost_rows: list[float] = []

    def finish():
        if cur_id is None:
            return
        if len(obs_rows) != len(act_rows) + 1:
            raise ConfigError(f"episode {cur_id} in {path} is missing its terminal row")
        episodes.append(
            Episode(cur_id, np.array(obs_rows), np.array(act_rows).reshape(-1, n_act), np.array(cost_rows))
        )

    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != 2 + n_obs + n_act + 1:
            raise ConfigError(f"malformed dataset row in {path}: {line!r}")
        ep_id = int(cells[0])
        if ep_id != cur_id:
            finish()
            cur_id = ep_id
            obs_rows, act_rows, cost_rows = [], [], []
        obs_rows.append([float(v) for v in cells[2 : 2 + n_obs]])
        terminal = cells[2 + n_obs] == ""
        if not terminal:
            act_rows.append([float(v) for v in cells[2 + n_obs : 2 + n_obs + n_act]])
            cost_rows.append(float(cells[-1]))
    finish()
    if not episodes:
        raise ConfigError(f"no episodes found in {path}")
    return Dataset(episodes)
