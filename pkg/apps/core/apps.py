from django.apps import AppConfig


class CoreConfig(AppConfig):
    """Shared exceptions, settings access and logging for the risk-measure apps."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.core'
    verbose_name = 'Core'
