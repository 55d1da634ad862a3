from caseboard.platform.service import (
    Case,
    CompanyLink,
    MarketEstimate,
    MarketSizeResult,
    MonthlyPnl,
    Overview,
    PlatformService,
    TestResponse,
    market_revenue_bounds,
)

__all__ = [
    "Case",
    "CompanyLink",
    "MarketEstimate",
    "MarketSizeResult",
    "MonthlyPnl",
    "Overview",
    "PlatformService",
    "TestResponse",
    "market_revenue_bounds",
]
