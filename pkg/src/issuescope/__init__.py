"""Repository-insight toolkit: snapshot GitHub issues and commits, compute
lifecycle, correlation, and churn analytics, and serve them to dashboards."""

__version__ = "0.1.0"
