from django.apps import AppConfig


class GnnConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "gnn"
    verbose_name = "Graph neural network layers"
