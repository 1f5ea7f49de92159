"""
Shared plumbing for the basym management commands
"""
import json
import logging
import random
import re

import numpy as np
from django.core.management.base import BaseCommand, CommandError

from basym.conf import get_config
from basym.exceptions import BasymError
from basym.session import load_session
from basym.verify import run

_T_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")

_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO, 3: logging.DEBUG}


def parse_t_range(value):
    """Parse 'a..b' into (a, b)"""
    m = _T_RANGE.match(value or "")
    if not m:
        raise CommandError(f"Cannot read --t '{value}', expected a..b")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise CommandError(f"Empty range --t {value}")
    return a, b


class SessionCommand(BaseCommand):
    """A command that loads a session file and runs one engine command on it"""

    command_name = None
    uses_window = True

    def add_arguments(self, parser):
        parser.add_argument(
            '--input',
            type=str,
            required=True,
            help='Session file',
        )
        parser.add_argument(
            '--ell',
            type=int,
            help='Homological index',
        )
        parser.add_argument(
            '--t',
            type=str,
            dest='t_range',
            help='Window of powers, a..b',
        )
        parser.add_argument(
            '--wcap',
            type=int,
            help='Largest phi-weight compared or printed',
        )
        parser.add_argument(
            '--json',
            type=str,
            dest='json_path',
            help='Write the report as JSON to this path',
        )
        parser.add_argument(
            '--tsv',
            type=str,
            dest='tsv_path',
            help='Write the report rows as TSV to this path',
        )
        parser.add_argument(
            '--seed',
            type=int,
            help='Seed for the random generators',
        )
        parser.add_argument(
            '--threads',
            type=int,
            help='Worker threads for oracle computations',
        )
        parser.add_argument(
            '--format',
            type=str,
            choices=['table', 'json', 'tsv'],
            default='table',
            help='Output format',
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        """Execute the command"""
        logging.getLogger('basym').setLevel(_LEVELS.get(options['verbosity'], logging.DEBUG))

        seed = options.get('seed')
        seed = get_config()['seed'] if seed is None else seed
        random.seed(seed)
        np.random.seed(seed)

        t_range = parse_t_range(options['t_range']) if options.get('t_range') else None
        wcap = options.get('wcap')
        if wcap is not None and wcap <= 0:
            raise CommandError(f'--wcap must be positive, got {wcap}')

        try:
            session = load_session(options['input'])
            errors = session.validate()
            if errors:
                raise BasymError("; ".join(errors))
            report = run(
                self.command_name,
                session,
                ell=options.get('ell'),
                t_range=t_range,
                wcap=wcap,
                threads=options.get('threads'),
                module=options.get('module'),
                ideal=options.get('ideal'),
            )
        except OSError as e:
            raise CommandError(f'{self.command_name}: cannot read {options["input"]}: {e}')
        except BasymError as e:
            raise CommandError(f'{self.command_name}: {e}')

        data = self.report_data(report)
        rows = self.report_rows(report)

        if options.get('json_path'):
            with open(options['json_path'], 'w') as fh:
                fh.write(json.dumps(data, indent=2, sort_keys=True) + '\n')
        if options.get('tsv_path'):
            with open(options['tsv_path'], 'w') as fh:
                fh.write(self._tsv(rows))

        format_type = options['format']
        self.output_format = format_type
        if format_type == 'json':
            self.stdout.write(json.dumps(data, indent=2, sort_keys=True))
        elif format_type == 'tsv':
            self.stdout.write(self._tsv(rows), ending='')
        else:
            self._display_table(rows)

        self.finish(report)

    def report_data(self, report):
        return report

    def report_rows(self, report):
        """Rows (tuples) for table and TSV output; the first row is the header"""
        raise NotImplementedError

    def finish(self, report):
        pass

    def _tsv(self, rows):
        return ''.join('\t'.join(str(v) for v in row) + '\n' for row in rows)

    def _display_table(self, rows):
        """Display report rows in table format"""
        if not rows:
            return
        header, body = rows[0], rows[1:]
        line = ' '.join('{:<20}' for _ in header)
        self.stdout.write('-' * 80)
        self.stdout.write(line.format(*[str(v) for v in header]))
        self.stdout.write('-' * 80)
        for row in body:
            self.stdout.write(line.format(*[str(v) for v in row]))
        self.stdout.write('-' * 80)
        self.stdout.write(f'\nTotal: {len(body)} rows')
