"""
Management command to print Stanley and support decompositions
"""
from basym.management.base import SessionCommand


def _degree(values):
    return ','.join(str(v) for v in values)


def _monoid(component):
    gens = ' '.join(f'({_degree(g)})' for g in component['generators'])
    return f"({_degree(component['shift'])}) + <{gens}>"


class Command(SessionCommand):
    help = 'Print the support decomposition of a declared module'
    command_name = 'stanley'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--module',
            type=str,
            help='Module name (default: the module selected by use, else S)',
        )

    def report_rows(self, report):
        rows = [('part', 'component')]
        for s in report['stanley']:
            rows.append(('stanley', f"{s['monomial']}*e{s['position'] + 1}*k[{','.join(s['variables'])}]"))
        for c in report['support']:
            rows.append(('support', _monoid(c)))
        toric = report.get('toric')
        if toric:
            for g in toric['binomials']:
                rows.append(('toric', g))
            for c in toric['support']:
                rows.append(('fiber', _monoid(c)))
        return rows
