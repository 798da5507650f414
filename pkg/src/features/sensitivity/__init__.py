# Sensitivity analysis feature
