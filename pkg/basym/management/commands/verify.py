"""
Management command to check predicted supports against the oracle
"""
from django.core.management.base import CommandError

from basym.management.base import SessionCommand


class Command(SessionCommand):
    help = 'Compare the asymptotic shape of Tor_ell with Betti tables of M I^t on the window'
    command_name = 'verify'

    def report_data(self, report):
        return report.to_dict()

    def report_rows(self, report):
        return [('ell', 't', 'degree', 'predicted', 'oracle')] + report.tsv_rows()

    def finish(self, report):
        mismatches = report.mismatches()
        table = self.output_format == 'table'
        if mismatches:
            for e in mismatches if table else ():
                self.stdout.write(self.style.ERROR(f'  ✗ ell={e.ell} t={list(e.t)}'))
            raise CommandError(f'verify: {len(mismatches)} mismatch(es)')
        if table:
            self.stdout.write(self.style.SUCCESS(f'\n✓ {len(report.entries)} checks passed'))
