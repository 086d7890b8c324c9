"""Central finite-difference check of autograd gradients.

Only forward evaluations are used for the numerical side, so the check is
independent of the backward pass it verifies. Run it on a float64 copy of
the network with dropout disabled.
"""

from __future__ import annotations

import random
from typing import Callable, Optional

import torch


def numerical_gradient(fn: Callable[[], torch.Tensor], param: torch.Tensor, indices,
                       eps: float = 1e-6) -> torch.Tensor:
    flat = param.data.view(-1)
    out = torch.zeros(len(indices), dtype=torch.float64)
    with torch.no_grad():
        for k, i in enumerate(indices):
            orig = flat[i].item()
            flat[i] = orig + eps
            plus = fn().item()
            flat[i] = orig - eps
            minus = fn().item()
            flat[i] = orig
            out[k] = (plus - minus) / (2 * eps)
    return out


def relative_error(analytic: torch.Tensor, numeric: torch.Tensor, floor: float = 1e-6) -> float:
    """``|a - n| / max(|a| + |n|, floor)`` over the whole tensor (2-norms).

    The floor makes gradients that are exactly zero (e.g. terms constant
    under a softmax) compare absolutely instead of dividing noise by noise.
    """
    diff = torch.linalg.norm(analytic - numeric).item()
    scale = torch.linalg.norm(analytic).item() + torch.linalg.norm(numeric).item()
    return diff / max(scale, floor)


def check_gradients(fn: Callable[[], torch.Tensor], named_params, eps: float = 1e-6,
                    max_entries: Optional[int] = None, seed: int = 0) -> dict:
    """Relative error per parameter tensor between autograd and central differences.

    ``max_entries`` caps the number of (randomly chosen) entries checked per
    tensor; ``None`` checks all of them.
    """
    named_params = [(n, p) for n, p in named_params if p.requires_grad]
    for _, p in named_params:
        p.grad = None
    fn().backward()
    rng = random.Random(seed)
    errors = {}
    for name, p in named_params:
        size = p.numel()
        indices = list(range(size))
        if max_entries is not None and size > max_entries:
            indices = sorted(rng.sample(indices, max_entries))
        grad = p.grad if p.grad is not None else torch.zeros_like(p)
        analytic = grad.detach().reshape(-1)[indices].to(torch.float64)
        errors[name] = relative_error(analytic, numerical_gradient(fn, p, indices, eps))
    return errors
