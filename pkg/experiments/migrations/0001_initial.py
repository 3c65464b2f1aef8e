# Generated by Django 5.2 on 2026-10-19 09:12

import django.core.validators
import django.db.models.deletion
import django.utils.timezone
import model_utils.fields
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="Experiment",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "task",
                    models.CharField(
                        choices=[
                            ("source-localization", "Source localization"),
                            ("authorship", "Authorship attribution"),
                        ],
                        default="source-localization",
                        max_length=20,
                    ),
                ),
                ("config", models.JSONField(default=dict)),
                ("out_dir", models.CharField(max_length=500)),
                (
                    "status",
                    model_utils.fields.StatusField(
                        choices=[
                            ("Running", "Running"),
                            ("Completed", "Completed"),
                            ("Failed", "Failed"),
                        ],
                        db_index=True,
                        default="Running",
                        max_length=100,
                        no_check_for_status=True,
                    ),
                ),
                ("started", models.DateTimeField(default=django.utils.timezone.now)),
                ("finished", models.DateTimeField(blank=True, null=True)),
                ("error", models.TextField(blank=True)),
            ],
            options={
                "db_table": "experiments_experiment",
                "ordering": ["-started"],
                "managed": True,
            },
        ),
        migrations.CreateModel(
            name="RoundRecord",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("architecture", models.CharField(max_length=40)),
                ("round_index", models.PositiveIntegerField()),
                ("seed", models.IntegerField()),
                (
                    "test_accuracy",
                    models.FloatField(
                        validators=[
                            django.core.validators.MinValueValidator(0.0),
                            django.core.validators.MaxValueValidator(1.0),
                        ]
                    ),
                ),
                ("final_train_loss", models.FloatField()),
                ("parameters", models.PositiveIntegerField()),
                ("seconds", models.FloatField(default=0.0)),
                ("dataset_hash", models.CharField(max_length=64)),
                (
                    "experiment",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="rounds",
                        to="experiments.experiment",
                    ),
                ),
            ],
            options={
                "verbose_name": "Round Record",
                "verbose_name_plural": "Round Records",
                "db_table": "experiments_roundrecord",
                "ordering": ["round_index", "architecture"],
                "constraints": [
                    models.UniqueConstraint(
                        fields=("experiment", "architecture", "round_index"),
                        name="unique_round_per_architecture",
                    )
                ],
            },
        ),
    ]
