"""Bandit-over-AWGN simulator: instances, the CAS link, the three UCB-style
schedules, Monte Carlo regret estimation, and the bound evaluators."""

from awgnbandit._core import *  # noqa: F401,F403
from awgnbandit._core import __version__  # noqa: F401
