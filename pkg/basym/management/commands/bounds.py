"""
Management command to print bounds for equigenerated ideals
"""
from basym.management.base import SessionCommand


def _degree(values):
    return ','.join(str(v) for v in values)


class Command(SessionCommand):
    help = 'Print Delta_i, Delta_i\' and the Hilbert polynomial of each strand'
    command_name = 'bounds'

    def report_rows(self, report):
        rows = [('i', 'eta', 'classification', 'threshold', 'polynomial')]
        for i, entry in report['indices'].items():
            for strand in entry['strands']:
                hilbert = strand.get('hilbert', {})
                rows.append(
                    (
                        i,
                        _degree(strand['eta']),
                        strand.get('classification', ''),
                        _degree(strand.get('threshold', [])),
                        hilbert.get('polynomial', ''),
                    )
                )
        return rows
