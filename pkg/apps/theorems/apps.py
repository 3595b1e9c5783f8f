from django.apps import AppConfig


class TheoremsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.theorems'
    verbose_name = 'Theorems'
