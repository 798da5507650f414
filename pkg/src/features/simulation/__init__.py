# Simulation feature
