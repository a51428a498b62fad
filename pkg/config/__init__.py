from .settings import get_config, reset_config, DEFAULT_CONFIG


__all__ = ["get_config", "reset_config", "DEFAULT_CONFIG"]
