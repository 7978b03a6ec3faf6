# Growth table for the cyclotomic shorthand p = 3, ell = 13 under the standard splitting model.
from gstower import ClassGroupModel, DecompositionModel, check_hypotheses, cyclotomic_spec, growth_table

spec = cyclotomic_spec(3, 13)
print(check_hypotheses(spec))

T = growth_table(spec, DecompositionModel.standard(spec.g), ClassGroupModel(), range(0, 7))
print(f"C_max = {T.C_max}  A/4 - B = {T.m_limit}  n0 = {T.n0}")
for row in T.rows:
    pr = row.profile
    print(f"n={pr.n}  D={pr.D:>6}  R={pr.R:>9}  rho/3^n={float(row.rho_bound / 3**pr.n):.4f}  m/9^n={float(row.m_bound / 9**pr.n):.3f}")
