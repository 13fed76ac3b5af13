# Categories package
