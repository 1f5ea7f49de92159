"""
Management command to print the asymptotic shape of a Tor support
"""
from basym.management.base import SessionCommand


def _degree(values):
    return ','.join(str(v) for v in values)


class Command(SessionCommand):
    help = 'Print the components (delta, t0, E) of supp Tor_ell(M I^t, k) for large t'
    command_name = 'shape'

    def report_rows(self, report):
        rows = [('delta', 't0', 'blocks')]
        for c in report['components']:
            blocks = ' | '.join(' '.join(f'({_degree(nu)})' for nu in block) for block in c['blocks'])
            rows.append((_degree(c['delta']), _degree(c['t0']), blocks))
        return rows

    def finish(self, report):
        if self.output_format != 'table':
            return
        self.stdout.write(f"threshold: {_degree(report['threshold'])}")
        if report.get('overlaps'):
            self.stdout.write(
                self.style.WARNING(f"Overlapping certificate components: {report['overlaps']}")
            )
