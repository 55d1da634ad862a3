"""Event-sourced business-development platform with an ETL pipeline into a
single-table time-series warehouse."""

__version__ = "0.1.0"
