"""
Django app configuration for basym
"""
import logging

from django.apps import AppConfig
from django.core.exceptions import ImproperlyConfigured

logger = logging.getLogger(__name__)


class BasymConfig(AppConfig):
    """Django app configuration for basym"""

    name = "basym"
    verbose_name = "Asymptotic Betti supports"

    def ready(self):
        """Validate BASYM_CONFIG when Django starts"""
        from .conf import get_config, validate_config

        config = get_config()
        errors = validate_config(config)
        if not errors:
            return
        if config.get("strict", True):
            raise ImproperlyConfigured(f"BASYM_CONFIG validation failed: {errors}")
        logger.warning("BASYM_CONFIG validation failed: %s", errors)
