# Features package