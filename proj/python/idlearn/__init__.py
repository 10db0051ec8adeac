"""Identification and finite-sample learning of interventional distributions."""

from ._core import (
    Error,
    Model,
    identify,
    latent_project,
    learn,
    learn_exact,
    oracle,
    random_net,
    simulate,
    verify,
)

__all__ = [
    "Error",
    "Model",
    "identify",
    "latent_project",
    "learn",
    "learn_exact",
    "oracle",
    "random_net",
    "simulate",
    "verify",
]
