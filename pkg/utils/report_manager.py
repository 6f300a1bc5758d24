"""utils/report_manager.py: Renders human-readable experiment reports from versioned Jinja templates."""

import logging
from pathlib import Path
from typing import Union

from jinja2 import Environment, FileSystemLoader, StrictUndefined, TemplateNotFound, UndefinedError, select_autoescape

from models.exceptions import ConfigError
from models.reports import TimingSummary
from utils.main_config import BENCH_REPORT_TEMPLATE, BENCH_REPORT_VERSION, TEMPLATES_DIR

logger = logging.getLogger(__name__)


class ReportManager:
    """ReportManager: Loads `<name>/<version>.jinja` templates and renders result records into Markdown."""

    def __init__(self, base_path: str = TEMPLATES_DIR, version: str = BENCH_REPORT_VERSION):
        self.base_path = base_path
        self.version = version
        self.env = Environment(
            loader=FileSystemLoader(self.base_path),
            autoescape=select_autoescape([]),  # plain-text / Markdown output
            trim_blocks=True,
            lstrip_blocks=True,
            undefined=StrictUndefined,
        )

    def render(self, report_name: str, context: dict) -> str:
        """Render `<report_name>/<version>.jinja`; a missing template or context variable is a ConfigError."""
        template_path = f'{report_name}/{self.version}.jinja'
        try:
            return self.env.get_template(template_path).render(context)
        except TemplateNotFound:
            raise ConfigError(f'Report template {template_path} not found under {self.base_path}')
        except UndefinedError as e:
            raise ConfigError(f'Report {template_path}: {e}') from e

    def bench_report(self, summary: TimingSummary) -> str:
        return self.render(BENCH_REPORT_TEMPLATE, summary.to_dict())

    def write(self, report: str, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report)
        logger.info('Wrote %s', path)
        return path
