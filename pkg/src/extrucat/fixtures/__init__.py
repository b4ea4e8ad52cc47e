"""Local HTTP fixture servers standing in for the CAD platform and the
company parts service during tests, demos and benchmarks."""

from .cad_server import CadFixtureServer, default_cad_fixture
from .stock_server import StockFixtureServer, demo_stock_service

__all__ = [
    "CadFixtureServer",
    "default_cad_fixture",
    "StockFixtureServer",
    "demo_stock_service",
]
