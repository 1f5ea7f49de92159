"""
Management command to print the Rees ideal
"""
from basym.management.base import SessionCommand


class Command(SessionCommand):
    help = 'Print generators of the Rees ideal of the session ideals'
    command_name = 'rees'

    def report_rows(self, report):
        return [('generator',)] + [(g,) for g in report['rees_ideal']]
