"""
This module defines the admin interface for the experiments app.
It customizes the admin views for the Experiment and RoundRecord models.
"""

from django.contrib import admin

from .models import Experiment, RoundRecord


class RoundRecordInline(admin.TabularInline):
    """
    Round results listed on the experiment page, read-only.
    """

    model = RoundRecord
    extra = 0
    can_delete = False
    readonly_fields = [
        "architecture",
        "round_index",
        "seed",
        "test_accuracy",
        "final_train_loss",
        "parameters",
        "seconds",
        "dataset_hash",
    ]


class ExperimentAdmin(admin.ModelAdmin):
    """
    Custom admin interface for the Experiment model.

    Attributes:
        list_display (list): Fields to display in the admin list view.
        list_filter (list): Fields to filter the list view.
            - task: Filter experiments by task.
            - status: Filter experiments by their current status.
        inlines (list): The round results of the experiment.
    """

    list_display = ["__str__", "task", "status", "started", "finished"]
    list_filter = ["task", "status"]
    readonly_fields = ["config", "started", "finished", "error"]
    inlines = [RoundRecordInline]


class RoundRecordAdmin(admin.ModelAdmin):
    """
    Custom admin interface for the RoundRecord model.

    Attributes:
        list_filter (list): Fields to filter the list view.
            - architecture: Filter the rounds by activation.
        ordering (list): Experiment, then round, then architecture.
    """

    list_display = ["experiment", "architecture", "round_index", "test_accuracy", "parameters"]
    list_filter = ["architecture"]
    ordering = ["experiment", "round_index", "architecture"]


admin.site.register(Experiment, ExperimentAdmin)
admin.site.register(RoundRecord, RoundRecordAdmin)
