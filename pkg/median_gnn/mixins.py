"""
This module holds the mixins shared by the management commands of the project.

### Mixins:
    - EngineCommandMixin:
        Maps engine errors to `CommandError` with the exit code of the error, makes usage errors
        exit with code 1 and provides the `--config`, `--seed`, `--activation` and `--out` flags.

        See more info in the Django documentation:
        https://docs.djangoproject.com/en/5.2/howto/custom-management-commands/
"""

import sys
from functools import partial

from django.core.exceptions import ValidationError
from django.core.management.base import CommandError

from experiments.forms import ExperimentConfigForm
from .exceptions import EXIT_USAGE, MedianGNNError


def usage_error(parser, message):
    """
    Replacement for `CommandParser.error()`: argparse exits with 2 on usage errors, the engine
    with 1.
    """
    if parser.called_from_command_line:
        parser.print_usage(sys.stderr)
        parser.exit(EXIT_USAGE, f"{parser.prog}: error: {message}\n")
    raise CommandError(f"Error: {message}", returncode=EXIT_USAGE)


class EngineCommandMixin:
    """
    A mixin for `BaseCommand` subclasses that run engine code.

    Subclasses implement `run(**options)` instead of `handle()`.

    Methods:
        `create_parser()`: Installs `usage_error()` on the parser.
        `add_config_arguments()`: Adds the experiment configuration flags.
        `experiment_config()`: Validates the configuration file plus flag overrides.
        `handle()`: Calls `run()` and translates engine errors.
    """

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.error = partial(usage_error, parser)
        return parser

    def add_config_arguments(self, parser):
        parser.add_argument("--config", help="JSON experiment configuration file.")
        parser.add_argument("--seed", type=int, help="Base seed; overrides the configuration.")
        parser.add_argument(
            "--activation",
            help="relu, med:r or dyn-med:R (long forms static-median:r, dynamic-median:R).",
        )
        parser.add_argument("--out", help="Output directory; overrides the configuration.")

    def experiment_config(self, options, **overrides):
        """
        Builds the `ExperimentConfig` of a command.

        Args:
            options (dict): The parsed options; --seed, --activation and --out override the file.
            **overrides: Further command-specific overrides; None values are ignored.

        Returns:
            ExperimentConfig: The validated configuration.

        Raises:
            CommandError: With exit code 1 and one "field: message" line per error.
        """
        overrides.update(
            seed=options.get("seed"),
            activation=options.get("activation"),
            out=options.get("out"),
        )
        try:
            form = ExperimentConfigForm.from_file(options.get("config"), **overrides)
            return form.experiment_config()
        except ValidationError as error:
            raise CommandError("\n".join(error.messages), returncode=EXIT_USAGE) from error

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except MedianGNNError as error:
            raise CommandError(str(error), returncode=error.exit_code) from error
