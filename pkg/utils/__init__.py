"""Shared logging, configuration and output helpers for k3calc."""
