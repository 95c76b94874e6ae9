"""Graph isomorphism network with sum aggregation and mean readout.

GIN-0 variant: each layer computes MLP(h_i + sum of neighbor features); the
learnable combine weight is fixed at zero. Per-layer graph features are
mean-pooled, passed through a linear map and dropout, and summed into the
class logits. Sum and mean are permutation-invariant, so node relabeling
leaves the logits unchanged.
"""

from __future__ import annotations

import torch
from torch import nn

from .data import Batch


def _mlp(in_dim: int, hidden: int) -> nn.Sequential:
    return nn.Sequential(
        nn.Linear(in_dim, hidden),
        nn.BatchNorm1d(hidden),
        nn.ReLU(),
        nn.Linear(hidden, hidden),
        nn.BatchNorm1d(hidden),
        nn.ReLU(),
    )


class Gin(nn.Module):
    def __init__(self, num_layers: int, hidden: int, num_classes: int,
                 dropout: float = 0.5, in_dim: int = 1):
        super().__init__()
        self.layers = nn.ModuleList()
        dim = in_dim
        for _ in range(num_layers):
            self.layers.append(_mlp(dim, hidden))
            dim = hidden
        # one readout head per layer (input features included), summed
        self.heads = nn.ModuleList(
            [nn.Linear(in_dim, num_classes)]
            + [nn.Linear(hidden, num_classes) for _ in range(num_layers)])
        self.dropout = nn.Dropout(dropout)

    @staticmethod
    def _aggregate(h: torch.Tensor, edge_index: torch.Tensor) -> torch.Tensor:
        out = torch.zeros_like(h)
        if edge_index.numel():
            src, dst = edge_index[0], edge_index[1]
            out.index_add_(0, dst, h[src])
        return out

    @staticmethod
    def _mean_pool(h: torch.Tensor, graph_id: torch.Tensor,
                   num_graphs: int) -> torch.Tensor:
        sums = torch.zeros((num_graphs, h.shape[1]), dtype=h.dtype)
        sums.index_add_(0, graph_id, h)
        counts = torch.zeros(num_graphs, dtype=h.dtype)
        counts.index_add_(0, graph_id, torch.ones(h.shape[0], dtype=h.dtype))
        return sums / counts.clamp(min=1).unsqueeze(1)

    def forward(self, batch: Batch) -> torch.Tensor:
        h = batch.x
        logits = self.dropout(self.heads[0](
            self._mean_pool(h, batch.graph_id, batch.num_graphs)))
        for layer, head in zip(self.layers, self.heads[1:]):
            h = layer(h + self._aggregate(h, batch.edge_index))
            logits = logits + self.dropout(head(
                self._mean_pool(h, batch.graph_id, batch.num_graphs)))
        return logits
