"""
Configuration

All tunables live in the ``BASYM_CONFIG`` Django setting. ``get_config()``
merges it over ``DEFAULTS``; ``configure()`` installs standalone settings when
the engine runs as a console script outside a Django project.
"""
from __future__ import annotations

import os
from typing import Dict, List, Optional

from sympy import isprime

DEFAULTS: Dict = {
    "characteristic": 32003,
    "t_max": 4,
    "wcap": 60,
    "threads": 1,
    "seed": 0,
    "fit_retries": 3,
    "fit_holdout": 3,
    "cache_timeout": 3600,
    "strict": True,
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "basym": {"handlers": ["console"], "level": "WARNING", "propagate": False},
    },
}


def get_config() -> Dict:
    """Return BASYM_CONFIG merged over the defaults"""
    from django.conf import settings

    config = dict(DEFAULTS)
    if settings.configured:
        config.update(getattr(settings, "BASYM_CONFIG", {}))
    return config


def validate_config(config: Optional[Dict] = None) -> List[str]:
    """Validate configuration values, returning a list of problems"""
    config = get_config() if config is None else config
    errors = []

    if not isprime(int(config["characteristic"])):
        errors.append(f"characteristic must be prime, got {config['characteristic']}")

    for key in ("t_max", "wcap", "threads", "fit_holdout"):
        if int(config[key]) <= 0:
            errors.append(f"{key} must be positive, got {config[key]}")

    if int(config["fit_retries"]) < 0:
        errors.append(f"fit_retries must be non-negative, got {config['fit_retries']}")

    return errors


def resolve_threads(flag: Optional[int] = None) -> int:
    """CLI flag, then BASYM_THREADS, then the configured default"""
    if flag:
        return int(flag)
    env = os.environ.get("BASYM_THREADS")
    if env:
        return int(env)
    return int(get_config()["threads"])


def configure(**overrides) -> None:
    """Set up standalone settings unless a project already configured Django"""
    import django
    from django.conf import settings

    if not settings.configured:
        settings.configure(
            INSTALLED_APPS=["basym"],
            CACHES={
                "default": {
                    "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
                    "LOCATION": "basym",
                }
            },
            LOGGING=LOGGING,
            BASYM_CONFIG=overrides,
            USE_TZ=True,
        )
        django.setup()
