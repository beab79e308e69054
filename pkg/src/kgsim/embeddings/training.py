"""Seeded SGD training of TransE and ComplEx embeddings on a graph store.

TransE minimizes the margin ranking loss
    sum max(0, gamma + d(h + r, t) - d(h' + r, t'))
over corrupted triples with per-epoch renormalization of entity vectors to
unit L2 norm. ComplEx minimizes the logistic loss softplus(-y * phi) with
phi(h, r, t) = Re(sum_k h_k * r_k * conj(t_k)) plus L2 regularization on
the touched embeddings. Both trainers corrupt head or tail uniformly
(50/50) and reject corruptions that recreate a known true triple.

The batch loss/gradient routines are pure functions of the parameter
matrices so they can be checked against finite differences directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..graph import GraphStore, METADATA_PROPERTIES
from .table import EmbeddingTable

_MAX_CORRUPT_TRIES = 20


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 32
    epochs: int = 200
    learning_rate: float = 0.05
    margin: float = 1.0
    negatives: int = 5
    batch_size: int = 64
    seed: int = 42
    norm: str = "L2"
    reg: float = 1e-4

    def __post_init__(self) -> None:
        numeric = {
            "dim": self.dim,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "margin": self.margin,
            "negatives": self.negatives,
            "batch_size": self.batch_size,
            "reg": self.reg,
        }
        for name, value in numeric.items():
            if value <= 0:
                raise ConfigError(f"{name} must be strictly positive")
        if self.norm not in ("L1", "L2"):
            raise ConfigError("norm must be 'L1' or 'L2'")


def structural_triples(store: GraphStore) -> list[tuple[str, str, str]]:
    """Edges usable as training triples (metadata/literal rows excluded)."""
    return [
        (e.node1, e.property, e.node2)
        for e in store.edges
        if e.property not in METADATA_PROPERTIES
    ]


def _indexed_triples(store: GraphStore):
    entities = sorted(store.node_ids())
    triples = structural_triples(store)
    if not triples:
        raise ConfigError("no trainable triples in the store")
    relations = sorted({p for _, p, _ in triples})
    ent_idx = {e: i for i, e in enumerate(entities)}
    rel_idx = {r: i for i, r in enumerate(relations)}
    idx = np.array(
        [(ent_idx[h], rel_idx[r], ent_idx[t]) for h, r, t in triples],
        dtype=np.int64,
    )
    return entities, relations, idx


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


# -- TransE -----------------------------------------------------------------


def _transe_distance_and_grad(ent, rel, triples, norm):
    diff = ent[triples[:, 0]] + rel[triples[:, 1]] - ent[triples[:, 2]]
    if norm == "L2":
        dist = np.linalg.norm(diff, axis=1)
        safe = np.where(dist > 1e-12, dist, 1.0)
        grad = diff / safe[:, None]
        grad[dist <= 1e-12] = 0.0
    else:
        dist = np.abs(diff).sum(axis=1)
        grad = np.sign(diff)
    return dist, grad


def transe_loss_grad(
    ent: np.ndarray,
    rel: np.ndarray,
    pos: np.ndarray,
    neg: np.ndarray,
    gamma: float,
    norm: str = "L2",
) -> tuple[float, np.ndarray, np.ndarray]:
    """Summed margin ranking loss over aligned positive/corrupted pairs and
    its gradients with respect to the full entity/relation matrices."""
    d_pos, g_pos = _transe_distance_and_grad(ent, rel, pos, norm)
    d_neg, g_neg = _transe_distance_and_grad(ent, rel, neg, norm)
    margin = gamma + d_pos - d_neg
    active = margin > 0
    loss = float(np.maximum(margin, 0.0).sum())

    scale = active.astype(np.float64)
    g_pos = g_pos * scale[:, None]
    g_neg = g_neg * scale[:, None]
    grad_ent = np.zeros_like(ent)
    grad_rel = np.zeros_like(rel)
    np.add.at(grad_ent, pos[:, 0], g_pos)
    np.add.at(grad_ent, pos[:, 2], -g_pos)
    np.add.at(grad_rel, pos[:, 1], g_pos)
    np.add.at(grad_ent, neg[:, 0], -g_neg)
    np.add.at(grad_ent, neg[:, 2], g_neg)
    np.add.at(grad_rel, neg[:, 1], -g_neg)
    return loss, grad_ent, grad_rel


# -- ComplEx ----------------------------------------------------------------


def complex_phi(h: np.ndarray, r: np.ndarray, t: np.ndarray) -> float:
    """Trilinear ComplEx score of storage-layout vectors [re..., im...]."""
    h = np.asarray(h, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    d = h.shape[-1] // 2
    hre, him = h[..., :d], h[..., d:]
    rre, rim = r[..., :d], r[..., d:]
    tre, tim = t[..., :d], t[..., d:]
    return float(
        (hre * rre * tre + him * rre * tim + hre * rim * tim - him * rim * tre).sum()
    )


def _phi_batch(ent, rel, triples):
    d = ent.shape[1] // 2
    H, R, T = ent[triples[:, 0]], rel[triples[:, 1]], ent[triples[:, 2]]
    hre, him = H[:, :d], H[:, d:]
    rre, rim = R[:, :d], R[:, d:]
    tre, tim = T[:, :d], T[:, d:]
    phi = (hre * rre * tre + him * rre * tim + hre * rim * tim - him * rim * tre).sum(
        axis=1
    )
    return phi, (hre, him, rre, rim, tre, tim)


def complex_loss_grad(
    ent: np.ndarray,
    rel: np.ndarray,
    triples: np.ndarray,
    labels: np.ndarray,
    reg: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Summed logistic loss softplus(-y * phi) + L2 penalty on the touched
    embeddings, with gradients for the full matrices."""
    phi, (hre, him, rre, rim, tre, tim) = _phi_batch(ent, rel, triples)
    y = labels.astype(np.float64)
    z = -y * phi
    H, R, T = ent[triples[:, 0]], rel[triples[:, 1]], ent[triples[:, 2]]
    penalty = (H * H).sum(axis=1) + (R * R).sum(axis=1) + (T * T).sum(axis=1)
    loss = float((np.logaddexp(0.0, z) + reg * penalty).sum())

    dphi = -y * _sigmoid(z)
    dh = np.concatenate(
        [rre * tre + rim * tim, rre * tim - rim * tre], axis=1
    ) * dphi[:, None]
    dr = np.concatenate(
        [hre * tre + him * tim, hre * tim - him * tre], axis=1
    ) * dphi[:, None]
    dt = np.concatenate(
        [hre * rre - him * rim, hre * rim + him * rre], axis=1
    ) * dphi[:, None]
    grad_ent = np.zeros_like(ent)
    grad_rel = np.zeros_like(rel)
    np.add.at(grad_ent, triples[:, 0], dh + (2.0 * reg) * H)
    np.add.at(grad_rel, triples[:, 1], dr + (2.0 * reg) * R)
    np.add.at(grad_ent, triples[:, 2], dt + (2.0 * reg) * T)
    return loss, grad_ent, grad_rel


# -- shared training machinery ----------------------------------------------


def _corrupt(
    rng: np.random.Generator,
    pos: np.ndarray,
    n_entities: int,
    true_set: set[tuple[int, int, int]],
) -> np.ndarray:
    """One corrupted triple per positive; head or tail replaced 50/50,
    redrawn (bounded tries) while the corruption is a known true triple."""
    neg = pos.copy()
    for i in range(len(pos)):
        side = 0 if rng.integers(0, 2) == 0 else 2
        for _ in range(_MAX_CORRUPT_TRIES):
            candidate = int(rng.integers(0, n_entities))
            neg[i, side] = candidate
            if (neg[i, 0], neg[i, 1], neg[i, 2]) not in true_set:
                break
    return neg


def _init_transe(rng, n_ent, n_rel, dim):
    bound = 6.0 / np.sqrt(dim)
    ent = rng.uniform(-bound, bound, size=(n_ent, dim))
    ent /= np.linalg.norm(ent, axis=1, keepdims=True)
    rel = rng.uniform(-bound, bound, size=(n_rel, dim))
    rel /= np.linalg.norm(rel, axis=1, keepdims=True)
    return ent, rel


def _init_complex(rng, n_ent, n_rel, dim):
    std = 1.0 / np.sqrt(dim)
    ent = rng.normal(0.0, std, size=(n_ent, 2 * dim))
    rel = rng.normal(0.0, std, size=(n_rel, 2 * dim))
    return ent, rel


def _to_table(kind, dim, entities, relations, ent, rel, losses, norm):
    table = EmbeddingTable(kind=kind, dim=dim, epoch_losses=losses, norm=norm)
    for i, node in enumerate(entities):
        table.vectors[node] = ent[i].copy()
    for i, prop in enumerate(relations):
        table.relations[prop] = rel[i].copy()
    return table


def random_table(store: GraphStore, config: TrainConfig, kind: str) -> EmbeddingTable:
    """The untrained, seeded init table; the baseline for training efficacy."""
    entities, relations, _ = _indexed_triples(store)
    rng = np.random.default_rng(config.seed)
    init = _init_transe if kind == "transe" else _init_complex
    ent, rel = init(rng, len(entities), len(relations), config.dim)
    return _to_table(kind, config.dim, entities, relations, ent, rel, [], config.norm)


def _train(store: GraphStore, config: TrainConfig, kind: str) -> EmbeddingTable:
    if not store.frozen:
        raise ConfigError("store must be frozen before training")
    entities, relations, triples = _indexed_triples(store)
    rng = np.random.default_rng(config.seed)
    init = _init_transe if kind == "transe" else _init_complex
    ent, rel = init(rng, len(entities), len(relations), config.dim)
    true_set = {tuple(t) for t in triples.tolist()}
    lr = config.learning_rate

    losses: list[float] = []
    for _ in range(config.epochs):
        order = rng.permutation(len(triples))
        loss_sum = 0.0
        samples = 0
        for start in range(0, len(triples), config.batch_size):
            pos = triples[order[start : start + config.batch_size]]
            pos_rep = np.repeat(pos, config.negatives, axis=0)
            neg = _corrupt(rng, pos_rep, len(entities), true_set)
            if kind == "transe":
                loss, g_ent, g_rel = transe_loss_grad(
                    ent, rel, pos_rep, neg, config.margin, config.norm
                )
                samples += len(pos_rep)
            else:
                both = np.concatenate([pos_rep, neg])
                labels = np.concatenate(
                    [np.ones(len(pos_rep)), -np.ones(len(neg))]
                )
                loss, g_ent, g_rel = complex_loss_grad(
                    ent, rel, both, labels, config.reg
                )
                samples += len(both)
            ent -= lr * g_ent
            rel -= lr * g_rel
            loss_sum += loss
        if kind == "transe":
            ent /= np.linalg.norm(ent, axis=1, keepdims=True)
        losses.append(loss_sum / samples)
    return _to_table(kind, config.dim, entities, relations, ent, rel, losses, config.norm)


def train_transe(store: GraphStore, config: TrainConfig) -> EmbeddingTable:
    """Margin-ranking TransE; deterministic for a given config.seed."""
    return _train(store, config, "transe")


def train_complex(store: GraphStore, config: TrainConfig) -> EmbeddingTable:
    """Logistic-loss ComplEx; deterministic for a given config.seed."""
    return _train(store, config, "complex")


def complex_score(table: EmbeddingTable, h: str, r: str, t: str) -> float:
    """phi(h, r, t) looked up by id on a trained ComplEx table."""
    if table.kind != "complex":
        raise ConfigError("complex_score needs a complex table")
    return complex_phi(table.vector(h), table.relations[r], table.vector(t))


# -- link-prediction evaluation ----------------------------------------------


def _score_matrix(table: EmbeddingTable, triples: list[tuple[str, str, str]]):
    """Score every entity as tail for each (h, r, *): higher = better."""
    ent_ids = list(table.vectors)
    E = np.stack([table.vectors[e] for e in ent_ids])
    pos = {e: i for i, e in enumerate(ent_ids)}
    scores = np.empty((len(triples), len(ent_ids)))
    for i, (h, r, t) in enumerate(triples):
        hv = table.vectors[h]
        rv = table.relations[r]
        if table.kind == "transe":
            diff = (hv + rv)[None, :] - E
            if table.norm == "L2":
                scores[i] = -np.linalg.norm(diff, axis=1)
            else:
                scores[i] = -np.abs(diff).sum(axis=1)
        elif table.kind == "complex":
            d = table.dim
            hre, him = hv[:d], hv[d:]
            rre, rim = rv[:d], rv[d:]
            a = hre * rre - him * rim
            b = hre * rim + him * rre
            scores[i] = E[:, :d] @ a + E[:, d:] @ b
        else:
            raise ConfigError(f"cannot rank tails with a {table.kind} table")
    true_cols = np.array([pos[t] for _, _, t in triples])
    return scores, true_cols


def tail_ranks(
    table: EmbeddingTable, triples: list[tuple[str, str, str]]
) -> np.ndarray:
    """Rank of each true tail among all entities (1 = best, optimistic)."""
    scores, true_cols = _score_matrix(table, triples)
    target = scores[np.arange(len(triples)), true_cols]
    return 1 + (scores > target[:, None]).sum(axis=1)


def hits_at_k(
    table: EmbeddingTable, triples: list[tuple[str, str, str]], k: int
) -> float:
    """Fraction of triples whose true tail ranks in the top k."""
    ranks = tail_ranks(table, triples)
    return float((ranks <= k).mean())
