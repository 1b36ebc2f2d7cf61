import requests

HEADERS = {'hue-application-key': 'demo-app-key'}


def list_lights():
    url = 'https://hue-bridge.local/clip/v2/resource/light?archetype=all'
    resp = requests.get(url, headers=HEADERS)
    return resp.json()
