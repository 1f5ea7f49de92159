"""
Management command to print oracle Betti tables of M I^t
"""
from basym.management.base import SessionCommand


class Command(SessionCommand):
    help = 'Print the Betti tables of M I^t for every t in the window'
    command_name = 'betti'

    def report_rows(self, report):
        rows = [('t', 'i', 'degree', 'multiplicity')]
        for t, table in report.items():
            for i, entries in table.items():
                for entry in entries:
                    degree = ','.join(str(v) for v in entry['degree'])
                    rows.append((t, i, degree, entry['multiplicity']))
        return rows
