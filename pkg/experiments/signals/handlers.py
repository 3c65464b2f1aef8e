"""
This module contains signal handlers for the experiments app.

Imported Signals
    - post_save: Sent after a model's `save` method is called.
"""

import logging

from django.db.models.signals import post_save
from django.dispatch import receiver

from experiments.models import Experiment

logger = logging.getLogger(__name__)


@receiver(post_save, sender=Experiment)
def log_status_change(sender, instance, created, **kwargs):
    """
    Logs the creation of an experiment and every change of its status.

    Arguments:
        sender (Experiment): The model class that sent the signal.
        instance (Experiment): The experiment that was saved.
        created (bool): True if the experiment has just been created.
        **kwargs: Additional keyword arguments sent by the signal.
    """
    if created:
        logger.info("experiment %s started (%s)", instance.pk, instance.task)
        return
    if "status" in instance.tracker.changed():
        level = logging.WARNING if instance.status == Experiment.STATUS.Failed else logging.INFO
        logger.log(
            level,
            "experiment %s: %s -> %s",
            instance.pk,
            instance.tracker.previous("status"),
            instance.status,
        )
