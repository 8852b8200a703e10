"""Continuous double auction lab: order-book simulator, randomized
intervention-bot harness, and the statistical analysis pipeline that
consumes the harness trial logs."""

__version__ = "0.1.0"
