"""Application layer: configuration, action tickets, the wired pipeline,
and the operator HTTP API."""

from farmgate.gateway.config import ConfigError, GatewayConfig, config_from_dict, load_config
from farmgate.gateway.pipeline import Gateway, run_pipeline
from farmgate.gateway.tickets import (
    ActionTicket,
    AlreadyDecidedError,
    InvalidDecisionError,
    TicketStore,
    UnknownTicketError,
)

__all__ = [
    "ActionTicket",
    "AlreadyDecidedError",
    "ConfigError",
    "Gateway",
    "GatewayConfig",
    "InvalidDecisionError",
    "TicketStore",
    "UnknownTicketError",
    "config_from_dict",
    "load_config",
    "run_pipeline",
]
