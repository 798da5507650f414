# Fisher randomization test feature
