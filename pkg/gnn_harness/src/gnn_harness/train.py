"""Training and evaluation of the GIN classifier on exported datasets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from sklearn.metrics import roc_auc_score
from torch import nn

from .data import Batch, Dataset, load_tudataset
from .model import Gin

# hyper-parameter domains; the desk-scale default grid is a subset
LAYER_CHOICES = (1, 2, 3, 4, 5)
HIDDEN_CHOICES = (16, 32, 64, 128)
LR_CHOICES = (1e-4, 1e-3, 1e-2)
DROPOUT_CHOICES = (0.0, 0.5)

DESK_GRID = {"num_layers": (2, 3), "hidden": (32, 64), "lr": (1e-3, 1e-2)}
FULL_GRID = {"num_layers": LAYER_CHOICES, "hidden": HIDDEN_CHOICES, "lr": LR_CHOICES}


@dataclass(frozen=True)
class GinConfig:
    num_layers: int = 2
    hidden: int = 32
    lr: float = 1e-2
    dropout: float = 0.5
    batch_size: int = 64
    epochs: int = 500
    patience: int = 25  # early stopping on validation accuracy

    def __post_init__(self):
        if self.num_layers not in LAYER_CHOICES:
            raise ValueError(f"num_layers must be in {LAYER_CHOICES}")
        if self.hidden not in HIDDEN_CHOICES:
            raise ValueError(f"hidden must be in {HIDDEN_CHOICES}")
        if not any(math.isclose(self.lr, c) for c in LR_CHOICES):
            raise ValueError(f"lr must be in {LR_CHOICES}")
        if self.dropout not in DROPOUT_CHOICES:
            raise ValueError(f"dropout must be in {DROPOUT_CHOICES}")
        if not 1 <= self.epochs <= 500:
            raise ValueError("epochs capped at 500")


@dataclass(frozen=True)
class SplitSpec:
    train: float = 0.65
    val: float = 0.15
    test: float = 0.20
    seed: int = 0

    def __post_init__(self):
        if abs(self.train + self.val + self.test - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")

    def indices(self, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        perm = np.random.default_rng(self.seed).permutation(n)
        n_train = int(round(self.train * n))
        n_val = int(round(self.val * n))
        return (perm[:n_train], perm[n_train:n_train + n_val],
                perm[n_train + n_val:])


def _batches(dataset: Dataset, indices: np.ndarray, batch_size: int,
             shuffle_rng: torch.Generator | None = None):
    order = indices
    if shuffle_rng is not None:
        order = indices[torch.randperm(len(indices), generator=shuffle_rng).numpy()]
    for start in range(0, len(order), batch_size):
        chunk = order[start:start + batch_size]
        yield Batch([dataset.graphs[i] for i in chunk], dataset.labels[chunk])


@torch.no_grad()
def _evaluate(model: Gin, dataset: Dataset, indices: np.ndarray,
              batch_size: int) -> tuple[float, float]:
    """(accuracy, AUC) over the given graphs; AUC is NaN if only one class."""
    model.eval()
    scores = []
    labels = []
    for batch in _batches(dataset, indices, batch_size):
        logits = model(batch)
        scores.append(torch.softmax(logits, dim=1).numpy())
        labels.append(batch.y.numpy())
    probs = np.concatenate(scores)
    y = np.concatenate(labels)
    accuracy = float((probs.argmax(axis=1) == y).mean())
    if np.unique(y).size < 2:
        return accuracy, float("nan")
    if probs.shape[1] == 2:
        auc = roc_auc_score(y, probs[:, 1])
    else:
        auc = roc_auc_score(y, probs, multi_class="ovr")
    return accuracy, float(auc)


def train_and_eval(dataset: "Dataset | str | Path", cfg: GinConfig,
                   split: SplitSpec) -> tuple[float, float]:
    """Train with early stopping on validation accuracy; report test metrics."""
    if not isinstance(dataset, Dataset):
        dataset = load_tudataset(dataset)
    if dataset.num_classes < 2:
        raise ValueError(f"{dataset.name}: need at least 2 classes")
    train_idx, val_idx, test_idx = split.indices(len(dataset))

    torch.manual_seed(split.seed * 1_000_003 + cfg.num_layers * 101 + cfg.hidden)
    shuffle_rng = torch.Generator().manual_seed(split.seed + 1)
    model = Gin(cfg.num_layers, cfg.hidden, dataset.num_classes, cfg.dropout)
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.lr)
    loss_fn = nn.CrossEntropyLoss()

    best_val = -1.0
    best_state = {k: v.clone() for k, v in model.state_dict().items()}
    stale = 0
    for _ in range(cfg.epochs):
        model.train()
        for batch in _batches(dataset, train_idx, cfg.batch_size, shuffle_rng):
            optimizer.zero_grad()
            loss = loss_fn(model(batch), batch.y)
            loss.backward()
            optimizer.step()
        val_acc, _ = _evaluate(model, dataset, val_idx, cfg.batch_size)
        if val_acc > best_val:
            best_val = val_acc
            best_state = {k: v.clone() for k, v in model.state_dict().items()}
            stale = 0
        else:
            stale += 1
            if stale >= cfg.patience:
                break
    model.load_state_dict(best_state)
    return _evaluate(model, dataset, test_idx, cfg.batch_size)


def grid_search(dataset: "Dataset | str | Path", split: SplitSpec,
                full: bool = False, dropout: float = 0.5) -> GinConfig:
    """Pick the grid point with the best validation accuracy."""
    if not isinstance(dataset, Dataset):
        dataset = load_tudataset(dataset)
    grid = FULL_GRID if full else DESK_GRID
    best_cfg = None
    best_val = -1.0
    train_idx, val_idx, _ = split.indices(len(dataset))
    for k in grid["num_layers"]:
        for hidden in grid["hidden"]:
            for lr in grid["lr"]:
                cfg = GinConfig(num_layers=k, hidden=hidden, lr=lr, dropout=dropout)
                sub = SplitSpec(split.train, split.val, split.test, split.seed)
                # validation metric drives the choice; test stays untouched
                torch.manual_seed(split.seed)
                model_val, _ = _train_for_validation(dataset, cfg, train_idx, val_idx)
                if model_val > best_val:
                    best_val = model_val
                    best_cfg = cfg
    return best_cfg


def _train_for_validation(dataset: Dataset, cfg: GinConfig,
                          train_idx: np.ndarray, val_idx: np.ndarray) -> tuple[float, None]:
    shuffle_rng = torch.Generator().manual_seed(7)
    model = Gin(cfg.num_layers, cfg.hidden, dataset.num_classes, cfg.dropout)
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.lr)
    loss_fn = nn.CrossEntropyLoss()
    best_val = -1.0
    stale = 0
    for _ in range(cfg.epochs):
        model.train()
        for batch in _batches(dataset, train_idx, cfg.batch_size, shuffle_rng):
            optimizer.zero_grad()
            loss_fn(model(batch), batch.y).backward()
            optimizer.step()
        val_acc, _ = _evaluate(model, dataset, val_idx, cfg.batch_size)
        if val_acc > best_val:
            best_val, stale = val_acc, 0
        else:
            stale += 1
            if stale >= cfg.patience:
                break
    return best_val, None
