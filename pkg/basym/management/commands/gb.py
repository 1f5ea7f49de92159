"""
Management command to print a reduced Groebner basis
"""
from basym.management.base import SessionCommand


class Command(SessionCommand):
    help = 'Print the reduced Groebner basis of a declared ideal'
    command_name = 'gb'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--ideal',
            type=str,
            help='Ideal name (default: the first declared ideal)',
        )

    def report_rows(self, report):
        return [('ideal', 'element')] + [(report['ideal'], g) for g in report['basis']]
